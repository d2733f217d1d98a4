#include "phasortrack/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phasortrack {

namespace {

template <typename T>
double rmse_impl(std::span<const T> estimates, T reference) {
    if (estimates.empty()) throw EmptyInputError("rmse of an empty estimate sequence");
    double acc = 0.0;
    for (const T& est : estimates) acc += std::norm(cplx(est) - cplx(reference));
    return std::sqrt(acc / static_cast<double>(estimates.size()));
}

} // namespace

double rmse(std::span<const double> estimates, double reference) {
    return rmse_impl(estimates, reference);
}

double rmse(std::span<const cplx> estimates, cplx reference) {
    return rmse_impl(estimates, reference);
}

MonteCarloReport monte_carlo(double noise_sigma, int n_trials, const EstimatorConfig& config,
                             std::size_t segment_length, std::uint64_t base_seed,
                             const std::optional<ModelParams>& init,
                             const SpectralInitConfig& spectral) {
    if (n_trials < 1) throw ModelError("monte carlo needs at least one trial");
    validate(config);

    const ReferenceSignal probe = reference_signal({noise_sigma, base_seed});
    const ModelStructure& structure = probe.structure;
    const ModelParams& truth = probe.params;
    const std::size_t n_segments = probe.signal.size() / segment_length;
    if (n_segments == 0)
        throw InvalidSegmentLengthError("segment length exceeds the reference signal length");
    const auto keys = structure.component_keys();

    // Estimates keyed by (segment, trial); trials are independent so the
    // aggregation below does not depend on execution order.
    struct SegmentEstimates {
        std::vector<double> omega0;
        std::vector<double> omegac;
        std::map<ComponentKey, std::vector<cplx>> phasors;
        int divergence_count = 0;
    };
    std::vector<SegmentEstimates> collected(n_segments);

    for (int t = 0; t < n_trials; ++t) {
        const ReferenceSignal trial =
            reference_signal({noise_sigma, base_seed + static_cast<std::uint64_t>(t)});
        TrackingResult tracked;
        try {
            tracked = track(trial.signal, segment_length, structure, config, init, spectral);
        } catch (const DivergenceError& e) {
            const auto seg = static_cast<std::size_t>(e.segment < 0 ? 0 : e.segment);
            collected[std::min(seg, n_segments - 1)].divergence_count += 1;
            continue;
        }
        for (std::size_t s = 0; s < n_segments; ++s) {
            const ModelParams& est = tracked.per_segment[s].params;
            collected[s].omega0.push_back(est.omega0);
            collected[s].omegac.push_back(est.omegac);
            for (const ComponentKey& key : keys)
                collected[s].phasors[key].push_back(est.phasors.at(key));
        }
    }

    MonteCarloReport report;
    report.n_trials = n_trials;
    report.base_seed = base_seed;
    report.per_segment.resize(n_segments);
    for (std::size_t s = 0; s < n_segments; ++s) {
        SegmentRmse& out = report.per_segment[s];
        out.divergence_count = collected[s].divergence_count;
        // Phasors are scored against the truth expressed in the segment's
        // local time origin.
        const ModelParams local_truth = shift_time_origin(
            truth, structure, static_cast<double>(s) * static_cast<double>(segment_length));
        if (collected[s].omega0.empty()) {
            for (const ComponentKey& key : keys) out.phasor_rmse[key] = 0.0;
            continue;
        }
        out.omega0_rmse = rmse(std::span<const double>(collected[s].omega0), truth.omega0);
        out.omegac_rmse = rmse(std::span<const double>(collected[s].omegac), truth.omegac);
        for (const ComponentKey& key : keys)
            out.phasor_rmse[key] = rmse(std::span<const cplx>(collected[s].phasors.at(key)),
                                        local_truth.phasors.at(key));
    }
    return report;
}

} // namespace phasortrack
