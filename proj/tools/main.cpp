// Command-line front end: current model synthesis, spectra, per-segment
// parameter estimation and tracking, and Monte Carlo accuracy studies.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phasortrack/run.hpp"

namespace {

struct CliOptions {
    std::optional<std::string> config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma;
    std::optional<double> alpha;
    std::optional<int> iters;
    std::optional<phasortrack::FitMode> mode;
};

void attach_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_dir, "Output directory for CSV files")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Override the noise seed");
    cmd->add_option("--sigma", opts.sigma, "Override the noise standard deviation");
    cmd->add_option("--alpha", opts.alpha, "Override the learning rate");
    cmd->add_option("--iters", opts.iters, "Override the iteration budget");
    cmd->add_option("--mode", opts.mode, "Estimator mode")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, phasortrack::FitMode>{
                {"joint", phasortrack::FitMode::JointGd},
                {"concentrated", phasortrack::FitMode::ConcentratedGd}},
            CLI::ignore_case));
}

} // namespace

int main(int argc, char** argv) {
    using phasortrack::Command;

    CLI::App app{"Current component decomposition and parameter tracking"};
    app.require_subcommand(1);

    CliOptions opts;
    std::map<const CLI::App*, Command> commands;
    commands[app.add_subcommand("generate", "Synthesize the configured signal to signal.csv")] =
        Command::Generate;
    commands[app.add_subcommand("spectrum", "Write the signal's magnitude spectrum")] =
        Command::Spectrum;
    commands[app.add_subcommand("estimate",
                                "Fit the first segment; write the loss trace and parameters")] =
        Command::Estimate;
    commands[app.add_subcommand("track",
                                "Fit every segment and write per-segment decompositions")] =
        Command::Track;
    commands[app.add_subcommand("montecarlo", "Run the seeded RMSE study")] = Command::MonteCarlo;
    for (auto& [sub, cmd] : commands) attach_common_options(const_cast<CLI::App*>(sub), opts);

    CLI11_PARSE(app, argc, argv);

    phasortrack::RunConfig config;
    try {
        std::optional<std::filesystem::path> path;
        if (opts.config_path) path = *opts.config_path;
        config = phasortrack::parse_config(path);
        if (opts.seed) config.signal.seed = *opts.seed;
        if (opts.sigma) config.signal.sigma = *opts.sigma;
        if (opts.alpha) config.estimator.alpha = *opts.alpha;
        if (opts.iters) config.estimator.max_iters = *opts.iters;
        if (opts.mode) config.estimator.mode = *opts.mode;
        phasortrack::validate(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return phasortrack::exit_code_for(e);
    }

    return phasortrack::run_command(commands.at(app.get_subcommands().front()), config,
                                    opts.out_dir);
}
