#ifndef PHASORTRACK_RUN_HPP
#define PHASORTRACK_RUN_HPP

#include <filesystem>

#include "phasortrack/config.hpp"

namespace phasortrack {

enum class Command { Generate, Spectrum, Estimate, Track, MonteCarlo };

// Exit codes shared by run_command and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // any other module error
inline constexpr int kExitConfig = 2;      // configuration rejected
inline constexpr int kExitDivergence = 3;  // estimation diverged
inline constexpr int kExitIo = 4;          // file I/O failed

/// Runs one command against `config`, writing CSV outputs under
/// `out_dir` (created if absent). Returns 0 on success; on error prints
/// a diagnostic to stderr and returns the matching exit code.
int run_command(Command command, const RunConfig& config, const std::filesystem::path& out_dir);

/// Exit code for an already-caught error.
int exit_code_for(const std::exception& error);

} // namespace phasortrack

#endif // PHASORTRACK_RUN_HPP
