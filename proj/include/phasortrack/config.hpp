#ifndef PHASORTRACK_CONFIG_HPP
#define PHASORTRACK_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "phasortrack/estimation.hpp"
#include "phasortrack/spectral.hpp"
#include "phasortrack/signal_model.hpp"

namespace phasortrack {

/// How the single-segment estimate command is initialized.
enum class InitPolicy {
    Nominal,  // configured f0/fc, all phasors zero
    Spectral, // peak picking plus least-squares phasors
};

/// Full run configuration. Defaults reproduce the standard validation
/// setup (60 Hz fundamental, three harmonics, three 5 Hz sidebands,
/// sigma 0.25, alpha 0.1, 350 iterations, 250-sample segments, 200
/// trials).
struct RunConfig {
    struct Signal {
        double sample_rate = 1000.0; // Hz
        int n_samples = 1000;
        double f0_hz = 60.0;
        double fundamental_amplitude = 0.7;
        double fundamental_phase = 0.0;
        std::vector<int> harmonic_indices{2, 3, 4};
        std::vector<double> harmonic_amplitudes{0.6, 0.5, 0.4};
        std::vector<double> harmonic_phases{0.0, 0.0, 0.0};
        std::vector<int> interharmonic_indices{1, 2, 3};
        double fc_hz = 5.0;
        std::vector<double> interharmonic_amplitudes{0.3, 0.2, 0.1};
        std::vector<double> interharmonic_phases{0.0, 0.0, 0.0};
        double sigma = 0.25;
        std::uint64_t seed = 1;
    };
    struct Estimator {
        double alpha = 0.1;
        int max_iters = 350;
        FitMode mode = FitMode::JointGd;
        double rel_tol = 1e-12;
        bool freq_precondition = true;
        InitPolicy init = InitPolicy::Nominal;
    };
    struct Tracking {
        int segment_length = 250;
    };
    struct Spectral {
        int n_fft = 0; // 0 = auto (signal length for spectra, 4x segment for components)
        double f0_search_lo = 40.0;
        double f0_search_hi = 80.0;
        double fc_search_lo = 1.0;
        double fc_search_hi = 20.0;
    };
    struct MonteCarlo {
        int n_trials = 200;
        std::uint64_t base_seed = 1;
    };

    Signal signal;
    Estimator estimator;
    Tracking tracking;
    Spectral spectral;
    MonteCarlo montecarlo;
};

/// Loads the JSON config file (all keys optional, unknown keys rejected)
/// and validates every field; with no path, returns the defaults.
RunConfig parse_config(const std::optional<std::filesystem::path>& path);

/// Validates cross-field invariants; throws ConfigError naming the key.
void validate(const RunConfig& config);

ModelStructure config_structure(const RunConfig::Signal& signal);
ModelParams config_truth_params(const RunConfig::Signal& signal);
EstimatorConfig config_estimator(const RunConfig::Estimator& estimator);
SpectralInitConfig config_spectral_init(const RunConfig::Spectral& spectral);

} // namespace phasortrack

#endif // PHASORTRACK_CONFIG_HPP
