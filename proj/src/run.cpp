#include "phasortrack/run.hpp"

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>

#include "phasortrack/csv_io.hpp"

namespace phasortrack {

namespace {

enum class LogLevel : int { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("PHASORTRACK_LOG");
        if (!env) return LogLevel::Info;
        const std::string v(env);
        if (v == "quiet") return LogLevel::Quiet;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << msg << '\n';
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << msg << '\n';
}

ComplexSignal build_signal(const RunConfig& config) {
    const auto& s = config.signal;
    const ComplexSignal clean =
        synthesize(config_truth_params(s), config_structure(s),
                   static_cast<std::size_t>(s.n_samples), s.sample_rate);
    return add_noise(clean, {s.sigma, s.seed});
}

ModelParams nominal_init(const RunConfig& config) {
    const auto& s = config.signal;
    ModelParams params;
    params.omega0 = 2.0 * std::numbers::pi * s.f0_hz / s.sample_rate;
    params.omegac = 2.0 * std::numbers::pi * s.fc_hz / s.sample_rate;
    for (const ComponentKey& key : config_structure(s).component_keys())
        params.phasors[key] = cplx{0.0, 0.0};
    return params;
}

std::size_t auto_n_fft(const RunConfig& config, std::size_t fallback) {
    return config.spectral.n_fft > 0 ? static_cast<std::size_t>(config.spectral.n_fft) : fallback;
}

void run_generate(const RunConfig& config, const std::filesystem::path& out) {
    const ComplexSignal signal = build_signal(config);
    write_signal_csv(out / "signal.csv", signal);
    log_info("generate: wrote " + (out / "signal.csv").string() + " (" +
             std::to_string(signal.size()) + " samples)");
}

void run_spectrum(const RunConfig& config, const std::filesystem::path& out) {
    const ComplexSignal signal = build_signal(config);
    const Spectrum spec = dft_magnitude(signal, auto_n_fft(config, signal.size()));
    write_spectrum_csv(out / "spectrum.csv", spec);
    log_info("spectrum: wrote " + (out / "spectrum.csv").string() + " (" +
             std::to_string(spec.n_fft) + " bins)");
}

void run_estimate(const RunConfig& config, const std::filesystem::path& out) {
    const ComplexSignal signal = build_signal(config);
    const ModelStructure structure = config_structure(config.signal);
    const SegmentSet set =
        segment_signal(signal, static_cast<std::size_t>(config.tracking.segment_length));
    const ComplexSignal& segment = set.segments.front();

    const ModelParams init =
        config.estimator.init == InitPolicy::Spectral
            ? initialize_from_spectrum(segment, structure, config_spectral_init(config.spectral))
            : nominal_init(config);
    const EstimationTrace trace =
        fit_segment(segment, init, structure, config_estimator(config.estimator));

    write_trace_csv(out / "trace.csv", trace.loss_history);
    write_params_csv(out / "params.csv", trace.final_params, structure, signal.sample_rate);
    log_info("estimate: " + std::to_string(trace.iterations_run) + " iterations, final loss " +
             format_double(trace.loss_history.back()) + "; wrote trace.csv, params.csv");
}

void run_track(const RunConfig& config, const std::filesystem::path& out) {
    const ComplexSignal signal = build_signal(config);
    const ModelStructure structure = config_structure(config.signal);
    const auto segment_length = static_cast<std::size_t>(config.tracking.segment_length);
    const TrackingResult result =
        track(signal, segment_length, structure, config_estimator(config.estimator), {},
              config_spectral_init(config.spectral));

    const std::size_t n_fft = auto_n_fft(config, 4 * segment_length);
    for (std::size_t s = 0; s < result.per_segment.size(); ++s) {
        const SegmentResult& seg = result.per_segment[s];
        const std::string tag = "seg" + std::to_string(s);
        write_params_csv(out / (tag + "_params.csv"), seg.params, structure, signal.sample_rate);
        write_trace_csv(out / (tag + "_trace.csv"), seg.trace.loss_history);
        write_decomposition_csv(out / (tag + "_components.csv"), seg.decomposition);
        write_decomposition_spectra_csv(out / (tag + "_spectra.csv"), seg.decomposition, n_fft);
        log_debug("track: segment " + std::to_string(s) + " finished after " +
                  std::to_string(seg.trace.iterations_run) + " iterations, final loss " +
                  format_double(seg.trace.loss_history.back()));
    }
    log_info("track: wrote params/trace/components/spectra CSVs for " +
             std::to_string(result.per_segment.size()) + " segments under " + out.string());
}

void run_montecarlo(const RunConfig& config, const std::filesystem::path& out) {
    const MonteCarloReport report = monte_carlo(
        config.signal.sigma, config.montecarlo.n_trials, config_estimator(config.estimator),
        static_cast<std::size_t>(config.tracking.segment_length), config.montecarlo.base_seed, {},
        config_spectral_init(config.spectral));
    write_montecarlo_csv(out / "rmse.csv", report, config.signal.sample_rate);
    log_info("montecarlo: " + std::to_string(report.n_trials) + " trials, wrote " +
             (out / "rmse.csv").string());
}

} // namespace

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
    if (dynamic_cast<const DivergenceError*>(&error)) return kExitDivergence;
    if (dynamic_cast<const IoError*>(&error)) return kExitIo;
    return kExitFailure;
}

int run_command(Command command, const RunConfig& config, const std::filesystem::path& out_dir) {
    try {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory " + out_dir.string());

        switch (command) {
        case Command::Generate: run_generate(config, out_dir); break;
        case Command::Spectrum: run_spectrum(config, out_dir); break;
        case Command::Estimate: run_estimate(config, out_dir); break;
        case Command::Track: run_track(config, out_dir); break;
        case Command::MonteCarlo: run_montecarlo(config, out_dir); break;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

} // namespace phasortrack
