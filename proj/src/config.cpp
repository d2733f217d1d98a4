#include "phasortrack/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <string>

#include <json.hpp>

namespace phasortrack {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& section, const std::string& prefix,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : section.items())
        if (!allowed.contains(key))
            throw ConfigError(prefix + key, "unknown configuration key");
}

template <typename T>
void load(const json& section, const std::string& prefix, const char* key, T& out) {
    if (!section.contains(key)) return;
    try {
        out = section.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(prefix + key, "value has the wrong type");
    }
}

void load_mode(const json& section, const std::string& prefix, const char* key, FitMode& out) {
    if (!section.contains(key)) return;
    std::string text;
    load(section, prefix, key, text);
    if (text == "joint") out = FitMode::JointGd;
    else if (text == "concentrated") out = FitMode::ConcentratedGd;
    else throw ConfigError(prefix + key, "expected \"joint\" or \"concentrated\"");
}

void load_init(const json& section, const std::string& prefix, const char* key, InitPolicy& out) {
    if (!section.contains(key)) return;
    std::string text;
    load(section, prefix, key, text);
    if (text == "nominal") out = InitPolicy::Nominal;
    else if (text == "spectral") out = InitPolicy::Spectral;
    else throw ConfigError(prefix + key, "expected \"nominal\" or \"spectral\"");
}

void parse_signal(const json& j, RunConfig::Signal& s) {
    reject_unknown_keys(j, "signal.",
                        {"sample_rate", "n_samples", "f0", "fundamental_amplitude",
                         "fundamental_phase", "harmonic_indices", "harmonic_amplitudes",
                         "harmonic_phases", "interharmonic_indices", "fc",
                         "interharmonic_amplitudes", "interharmonic_phases", "sigma", "seed"});
    load(j, "signal.", "sample_rate", s.sample_rate);
    load(j, "signal.", "n_samples", s.n_samples);
    load(j, "signal.", "f0", s.f0_hz);
    load(j, "signal.", "fundamental_amplitude", s.fundamental_amplitude);
    load(j, "signal.", "fundamental_phase", s.fundamental_phase);
    load(j, "signal.", "harmonic_indices", s.harmonic_indices);
    load(j, "signal.", "harmonic_amplitudes", s.harmonic_amplitudes);
    load(j, "signal.", "harmonic_phases", s.harmonic_phases);
    load(j, "signal.", "interharmonic_indices", s.interharmonic_indices);
    load(j, "signal.", "fc", s.fc_hz);
    load(j, "signal.", "interharmonic_amplitudes", s.interharmonic_amplitudes);
    load(j, "signal.", "interharmonic_phases", s.interharmonic_phases);
    load(j, "signal.", "sigma", s.sigma);
    load(j, "signal.", "seed", s.seed);
}

void parse_estimator(const json& j, RunConfig::Estimator& e) {
    reject_unknown_keys(j, "estimator.",
                        {"alpha", "max_iters", "mode", "rel_tol", "freq_precondition", "init"});
    load(j, "estimator.", "alpha", e.alpha);
    load(j, "estimator.", "max_iters", e.max_iters);
    load_mode(j, "estimator.", "mode", e.mode);
    load(j, "estimator.", "rel_tol", e.rel_tol);
    load(j, "estimator.", "freq_precondition", e.freq_precondition);
    load_init(j, "estimator.", "init", e.init);
}

void parse_tracking(const json& j, RunConfig::Tracking& t) {
    reject_unknown_keys(j, "tracking.", {"segment_length"});
    load(j, "tracking.", "segment_length", t.segment_length);
}

void parse_spectral(const json& j, RunConfig::Spectral& s) {
    reject_unknown_keys(j, "spectral.", {"n_fft", "f0_search", "fc_search"});
    load(j, "spectral.", "n_fft", s.n_fft);
    if (j.contains("f0_search")) {
        std::vector<double> range;
        load(j, "spectral.", "f0_search", range);
        if (range.size() != 2) throw ConfigError("spectral.f0_search", "expected [lo, hi]");
        s.f0_search_lo = range[0];
        s.f0_search_hi = range[1];
    }
    if (j.contains("fc_search")) {
        std::vector<double> range;
        load(j, "spectral.", "fc_search", range);
        if (range.size() != 2) throw ConfigError("spectral.fc_search", "expected [lo, hi]");
        s.fc_search_lo = range[0];
        s.fc_search_hi = range[1];
    }
}

void parse_montecarlo(const json& j, RunConfig::MonteCarlo& m) {
    reject_unknown_keys(j, "montecarlo.", {"n_trials", "base_seed"});
    load(j, "montecarlo.", "n_trials", m.n_trials);
    load(j, "montecarlo.", "base_seed", m.base_seed);
}

void check(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

} // namespace

RunConfig parse_config(const std::optional<std::filesystem::path>& path) {
    RunConfig config;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw IoError("cannot open config file " + path->string());
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(path->string(), std::string("malformed JSON: ") + e.what());
        }
        reject_unknown_keys(j, "", {"signal", "estimator", "tracking", "spectral", "montecarlo"});
        if (j.contains("signal")) parse_signal(j.at("signal"), config.signal);
        if (j.contains("estimator")) parse_estimator(j.at("estimator"), config.estimator);
        if (j.contains("tracking")) parse_tracking(j.at("tracking"), config.tracking);
        if (j.contains("spectral")) parse_spectral(j.at("spectral"), config.spectral);
        if (j.contains("montecarlo")) parse_montecarlo(j.at("montecarlo"), config.montecarlo);
    }
    validate(config);
    return config;
}

void validate(const RunConfig& config) {
    const auto& s = config.signal;
    check(std::isfinite(s.sample_rate) && s.sample_rate > 0.0, "signal.sample_rate",
          "must be positive");
    check(s.n_samples >= 1, "signal.n_samples", "must be at least 1");
    check(std::isfinite(s.sigma) && s.sigma >= 0.0, "signal.sigma", "must be non-negative");
    check(std::isfinite(s.f0_hz) && s.f0_hz > 0.0 && s.f0_hz < s.sample_rate / 2.0, "signal.f0",
          "must lie in (0, sample_rate/2)");
    check(std::isfinite(s.fc_hz) && s.fc_hz > 0.0 && s.fc_hz < s.f0_hz, "signal.fc",
          "must lie in (0, f0)");
    check(s.harmonic_amplitudes.size() == s.harmonic_indices.size(), "signal.harmonic_amplitudes",
          "must match harmonic_indices in length");
    check(s.harmonic_phases.size() == s.harmonic_indices.size(), "signal.harmonic_phases",
          "must match harmonic_indices in length");
    check(s.interharmonic_amplitudes.size() == s.interharmonic_indices.size(),
          "signal.interharmonic_amplitudes", "must match interharmonic_indices in length");
    check(s.interharmonic_phases.size() == s.interharmonic_indices.size(),
          "signal.interharmonic_phases", "must match interharmonic_indices in length");
    try {
        const ModelStructure structure = config_structure(s);
        validate(config_truth_params(s), structure);
    } catch (const ModelError& e) {
        throw ConfigError("signal", e.what());
    }

    const auto& e = config.estimator;
    check(std::isfinite(e.alpha) && e.alpha > 0.0, "estimator.alpha", "must be positive");
    check(e.max_iters >= 1, "estimator.max_iters", "must be at least 1");
    check(std::isfinite(e.rel_tol) && e.rel_tol >= 0.0, "estimator.rel_tol",
          "must be non-negative");

    check(config.tracking.segment_length >= 1, "tracking.segment_length", "must be at least 1");
    check(config.tracking.segment_length <= s.n_samples, "tracking.segment_length",
          "must not exceed signal.n_samples (segmentation needs at least one full segment)");

    const auto& sp = config.spectral;
    check(sp.n_fft >= 0, "spectral.n_fft", "must be non-negative (0 selects automatically)");
    check(sp.f0_search_lo > 0.0 && sp.f0_search_lo < sp.f0_search_hi &&
              sp.f0_search_hi < s.sample_rate / 2.0,
          "spectral.f0_search", "must satisfy 0 < lo < hi < sample_rate/2");
    check(sp.fc_search_lo > 0.0 && sp.fc_search_lo < sp.fc_search_hi, "spectral.fc_search",
          "must satisfy 0 < lo < hi");

    check(config.montecarlo.n_trials >= 1, "montecarlo.n_trials", "must be at least 1");
}

ModelStructure config_structure(const RunConfig::Signal& signal) {
    return make_structure(signal.harmonic_indices, signal.interharmonic_indices);
}

ModelParams config_truth_params(const RunConfig::Signal& signal) {
    // make_structure sorts; amplitudes/phases are matched to the indices
    // as written in the config, so pair them before sorting.
    ModelParams params;
    params.omega0 = 2.0 * std::numbers::pi * signal.f0_hz / signal.sample_rate;
    params.omegac = 2.0 * std::numbers::pi * signal.fc_hz / signal.sample_rate;
    params.phasors[ComponentKey::fundamental()] =
        phasor_from_polar(signal.fundamental_amplitude, signal.fundamental_phase);
    for (std::size_t i = 0; i < signal.harmonic_indices.size(); ++i)
        params.phasors[ComponentKey::harmonic(signal.harmonic_indices[i])] =
            phasor_from_polar(signal.harmonic_amplitudes[i], signal.harmonic_phases[i]);
    for (std::size_t i = 0; i < signal.interharmonic_indices.size(); ++i)
        params.phasors[ComponentKey::interharmonic(signal.interharmonic_indices[i])] =
            phasor_from_polar(signal.interharmonic_amplitudes[i], signal.interharmonic_phases[i]);
    return params;
}

EstimatorConfig config_estimator(const RunConfig::Estimator& estimator) {
    return {estimator.alpha, estimator.max_iters, estimator.mode, estimator.rel_tol,
            estimator.freq_precondition};
}

SpectralInitConfig config_spectral_init(const RunConfig::Spectral& spectral) {
    return {spectral.f0_search_lo, spectral.f0_search_hi, spectral.fc_search_lo,
            spectral.fc_search_hi};
}

} // namespace phasortrack
