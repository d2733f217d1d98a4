#ifndef PHASORTRACK_VALIDATION_HPP
#define PHASORTRACK_VALIDATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "phasortrack/tracking.hpp"

namespace phasortrack {

/// sqrt(sum |est_i - ref|^2 / n)
double rmse(std::span<const double> estimates, double reference);
double rmse(std::span<const cplx> estimates, cplx reference);

struct SegmentRmse {
    double omega0_rmse = 0.0; // rad/sample
    double omegac_rmse = 0.0; // rad/sample
    std::map<ComponentKey, double> phasor_rmse;
    int divergence_count = 0;
};

struct MonteCarloReport {
    int n_trials = 0;
    std::uint64_t base_seed = 0;
    std::vector<SegmentRmse> per_segment;
};

/// Repeated-trial accuracy study on the reference signal. Trial t uses
/// noise seed base_seed + t, tracks all segments, and scores each
/// parameter against the ground truth (phasors against the truth rotated
/// to the segment's local time origin). Divergent trials are skipped and
/// counted; the report is a pure function of the arguments.
MonteCarloReport monte_carlo(double noise_sigma, int n_trials, const EstimatorConfig& config,
                             std::size_t segment_length, std::uint64_t base_seed,
                             const std::optional<ModelParams>& init = {},
                             const SpectralInitConfig& spectral = {});

} // namespace phasortrack

#endif // PHASORTRACK_VALIDATION_HPP
