#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "phasortrack/csv_io.hpp"
#include "phasortrack/run.hpp"

using namespace phasortrack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    TempDir() {
        path = fs::temp_directory_path() /
               ("phasortrack_test_" + std::to_string(counter++) + "_" +
                std::to_string(static_cast<unsigned>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path path;
    static inline int counter = 0;
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::size_t data_rows(const fs::path& p, const std::string& expected_header) {
    std::ifstream in(p);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == expected_header);
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    return rows;
}

} // namespace

TEST_CASE("parse_config without a file yields the reference defaults") {
    const RunConfig config = parse_config({});
    CHECK(config.signal.sample_rate == 1000.0);
    CHECK(config.signal.n_samples == 1000);
    CHECK(config.signal.f0_hz == 60.0);
    CHECK(config.signal.fundamental_amplitude == 0.7);
    CHECK(config.signal.fc_hz == 5.0);
    CHECK(config.signal.sigma == 0.25);
    CHECK(config.estimator.alpha == 0.1);
    CHECK(config.estimator.max_iters == 350);
    CHECK(config.estimator.freq_precondition);
    CHECK(config.tracking.segment_length == 250);
    CHECK(config.montecarlo.n_trials == 200);
}

TEST_CASE("the committed default config file reproduces the built-in defaults") {
    const RunConfig from_file =
        parse_config(fs::path(PHASORTRACK_SOURCE_DIR) / "configs" / "default.json");
    const RunConfig builtin = parse_config({});
    CHECK(from_file.signal.f0_hz == builtin.signal.f0_hz);
    CHECK(from_file.signal.sigma == builtin.signal.sigma);
    CHECK(from_file.signal.harmonic_amplitudes == builtin.signal.harmonic_amplitudes);
    CHECK(from_file.signal.interharmonic_indices == builtin.signal.interharmonic_indices);
    CHECK(from_file.estimator.alpha == builtin.estimator.alpha);
    CHECK(from_file.estimator.max_iters == builtin.estimator.max_iters);
    CHECK(from_file.estimator.mode == builtin.estimator.mode);
    CHECK(from_file.tracking.segment_length == builtin.tracking.segment_length);
    CHECK(from_file.spectral.f0_search_lo == builtin.spectral.f0_search_lo);
    CHECK(from_file.montecarlo.n_trials == builtin.montecarlo.n_trials);
}

TEST_CASE("a negative sigma is rejected with the offending key") {
    TempDir dir;
    const auto path = write_file(dir.path, "bad.json", R"({"signal": {"sigma": -1.0}})");
    try {
        parse_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "signal.sigma");
    }
}

TEST_CASE("overriding one key keeps every other default") {
    TempDir dir;
    const auto path = write_file(dir.path, "alpha.json", R"({"estimator": {"alpha": 0.05}})");
    const RunConfig config = parse_config(path);
    CHECK(config.estimator.alpha == 0.05);
    CHECK(config.estimator.max_iters == 350);
    CHECK(config.signal.f0_hz == 60.0);
    CHECK(config.tracking.segment_length == 250);
}

TEST_CASE("unknown configuration keys are rejected by name") {
    TempDir dir;
    const auto path = write_file(dir.path, "unknown.json", R"({"signal": {"f_zero": 50.0}})");
    try {
        parse_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "signal.f_zero");
    }
}

TEST_CASE("a segment length beyond the signal is rejected at parse time") {
    TempDir dir;
    const auto path =
        write_file(dir.path, "m.json", R"({"tracking": {"segment_length": 2000}})");
    try {
        parse_config(path);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key == "tracking.segment_length");
        CHECK(std::string(e.what()).find("segment") != std::string::npos);
    }
}

TEST_CASE("malformed json is reported as a configuration error") {
    TempDir dir;
    const auto path = write_file(dir.path, "broken.json", "{ not json");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
}

TEST_CASE("signal csv round-trips bit-exactly") {
    TempDir dir;
    const auto ref = reference_signal({0.25, 67});
    const fs::path path = dir.path / "signal.csv";
    write_signal_csv(path, ref.signal);
    const ComplexSignal back = read_signal_csv(path, ref.signal.sample_rate);
    REQUIRE(back.size() == ref.signal.size());
    for (std::size_t n = 0; n < back.size(); ++n) CHECK(back.samples[n] == ref.signal.samples[n]);
}

TEST_CASE("csv headers match the documented schemas exactly") {
    TempDir dir;
    const auto ref = reference_signal({0.0, 0});

    write_signal_csv(dir.path / "s.csv", ref.signal);
    CHECK(first_line(dir.path / "s.csv") == "index,real,imag");

    write_spectrum_csv(dir.path / "sp.csv", dft_magnitude(ref.signal, 1000));
    CHECK(first_line(dir.path / "sp.csv") == "freq_hz,magnitude");

    const std::vector<double> losses{1.0, 0.5};
    write_trace_csv(dir.path / "t.csv", losses);
    CHECK(first_line(dir.path / "t.csv") == "iteration,loss");

    write_params_csv(dir.path / "p.csv", ref.params, ref.structure, 1000.0);
    CHECK(first_line(dir.path / "p.csv") == "name,value_real,value_imag");
}

TEST_CASE("malformed csv rows report their line number") {
    TempDir dir;
    const auto path =
        write_file(dir.path, "bad.csv", "index,real,imag\n0,1.0,0.0\n1,oops,0.0\n");
    try {
        read_signal_csv(path, 1000.0);
        FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("csv readers reject unexpected headers") {
    TempDir dir;
    const auto path = write_file(dir.path, "h.csv", "idx,re,im\n");
    CHECK_THROWS_AS(read_signal_csv(path, 1000.0), CsvParseError);
}

TEST_CASE("generate writes one row per sample") {
    TempDir dir;
    const RunConfig config = parse_config({});
    REQUIRE(run_command(Command::Generate, config, dir.path) == kExitOk);
    const auto rows = read_csv_table(dir.path / "signal.csv", "index,real,imag");
    CHECK(rows.size() == 1000);
}

TEST_CASE("generate output is byte-identical across runs") {
    TempDir a;
    TempDir b;
    const RunConfig config = parse_config({});
    REQUIRE(run_command(Command::Generate, config, a.path) == kExitOk);
    REQUIRE(run_command(Command::Generate, config, b.path) == kExitOk);
    CHECK(read_file(a.path / "signal.csv") == read_file(b.path / "signal.csv"));
}

TEST_CASE("spectrum command emits the configured transform") {
    TempDir dir;
    RunConfig config = parse_config({});
    config.signal.sigma = 0.0;
    REQUIRE(run_command(Command::Spectrum, config, dir.path) == kExitOk);
    const auto rows = read_csv_table(dir.path / "spectrum.csv", "freq_hz,magnitude");
    CHECK(rows.size() == 1000);
}

TEST_CASE("estimate command writes a loss trace and final parameters") {
    TempDir dir;
    RunConfig config = parse_config({});
    config.estimator.max_iters = 40;
    REQUIRE(run_command(Command::Estimate, config, dir.path) == kExitOk);
    const auto trace = read_trace_csv(dir.path / "trace.csv");
    CHECK(!trace.empty());
    CHECK(trace.size() <= 40);
    CHECK(data_rows(dir.path / "params.csv", "name,value_real,value_imag") == 9); // f0, fc, 7 phasors
}

TEST_CASE("track on clean data leaves a negligible residual in every file") {
    TempDir dir;
    RunConfig config = parse_config({});
    config.signal.sigma = 0.0; // defaults otherwise
    REQUIRE(run_command(Command::Track, config, dir.path) == kExitOk);

    for (int s = 0; s < 4; ++s) {
        const fs::path file = dir.path / ("seg" + std::to_string(s) + "_components.csv");
        const auto rows = read_csv_table(
            file,
            "index,fundamental_real,fundamental_imag,harmonic_real,harmonic_imag,"
            "interharmonic_real,interharmonic_imag,residual_real,residual_imag");
        REQUIRE(rows.size() == 250);
        double worst = 0.0;
        for (const auto& row : rows)
            worst = std::max(worst, std::hypot(row[7], row[8]));
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("montecarlo command writes the rmse table") {
    TempDir dir;
    RunConfig config = parse_config({});
    config.montecarlo.n_trials = 2;
    config.estimator.mode = FitMode::ConcentratedGd;
    config.estimator.max_iters = 40;
    REQUIRE(run_command(Command::MonteCarlo, config, dir.path) == kExitOk);
    CHECK(data_rows(dir.path / "rmse.csv", "segment,parameter,rmse,divergence_count") ==
          4 * 9); // four segments, f0/fc plus seven phasors
}

TEST_CASE("run_command maps module failures to distinct exit codes") {
    TempDir dir;

    // Estimation failure: spectral initialization cannot find a peak in a
    // pure-noise-free zero-amplitude signal.
    RunConfig config = parse_config({});
    config.signal.sigma = 0.0;
    config.signal.fundamental_amplitude = 0.0;
    config.signal.harmonic_amplitudes = {0.0, 0.0, 0.0};
    config.signal.interharmonic_amplitudes = {0.0, 0.0, 0.0};
    config.estimator.init = InitPolicy::Spectral;
    CHECK(run_command(Command::Estimate, config, dir.path) == kExitFailure);

    // Divergence maps to its own code.
    RunConfig diverging = parse_config({});
    diverging.estimator.alpha = 1e30;
    diverging.estimator.freq_precondition = false;
    CHECK(run_command(Command::Track, diverging, dir.path) == kExitDivergence);

    // Unwritable output directory maps to the I/O code.
    const RunConfig defaults = parse_config({});
    CHECK(run_command(Command::Generate, defaults, "/proc/phasortrack_forbidden") == kExitIo);

    CHECK(exit_code_for(ConfigError("k", "m")) == kExitConfig);
}
