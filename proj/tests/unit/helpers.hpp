#ifndef PHASORTRACK_TEST_HELPERS_HPP
#define PHASORTRACK_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "phasortrack/estimation.hpp"
#include "phasortrack/signal_model.hpp"

namespace phasortrack::testing {

// Uniform draws from raw mt19937_64 bits; reproducible across standard
// library implementations.
struct TestRng {
    explicit TestRng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53; // [0, 1)
        return lo + (hi - lo) * u;
    }

    std::mt19937_64 engine;
};

inline ModelStructure ref_structure() { return make_structure({2, 3, 4}, {1, 2, 3}); }

// Valid random parameter point for the reference structure: frequencies
// kept well inside the band, phasors in the unit box.
inline ModelParams random_point(TestRng& rng, const ModelStructure& structure) {
    ModelParams p;
    p.omega0 = rng.uniform(0.15, 0.7);
    p.omegac = rng.uniform(0.01, 0.12);
    for (const ComponentKey& key : structure.component_keys())
        p.phasors[key] = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return p;
}

// Worst per-coordinate mismatch between an analytic and a finite-difference
// gradient, relative to the coordinate size with a floor at 1% of the
// largest entry (near-zero coordinates carry no relative precision).
inline double max_gradient_mismatch(const GradientVector& analytic, const GradientVector& fd) {
    std::vector<std::pair<double, double>> coords{{analytic.d_omega0, fd.d_omega0},
                                                  {analytic.d_omegac, fd.d_omegac}};
    for (const auto& [key, value] : fd.d_phasors) {
        const cplx a = analytic.d_phasors.at(key);
        coords.emplace_back(a.real(), value.real());
        coords.emplace_back(a.imag(), value.imag());
    }
    double inf_norm = 0.0;
    for (const auto& [a, f] : coords) inf_norm = std::max(inf_norm, std::abs(f));
    const double floor = 0.01 * (1.0 + inf_norm);
    double worst = 0.0;
    for (const auto& [a, f] : coords)
        worst = std::max(worst, std::abs(a - f) / std::max(std::abs(f), floor));
    return worst;
}

} // namespace phasortrack::testing

#endif // PHASORTRACK_TEST_HELPERS_HPP
