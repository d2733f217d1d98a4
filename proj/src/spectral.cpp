#include "phasortrack/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasortrack/estimation.hpp"

namespace phasortrack {

namespace {

constexpr double kPi = std::numbers::pi;

double median(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    return values[mid];
}

} // namespace

Spectrum dft_magnitude(const ComplexSignal& signal, std::size_t n_fft) {
    validate(signal);
    const std::size_t n_sig = signal.size();
    if (n_fft < n_sig)
        throw InvalidFftSizeError("n_fft " + std::to_string(n_fft) +
                                  " is smaller than the signal length " + std::to_string(n_sig));

    Spectrum spec;
    spec.n_fft = n_fft;
    spec.bin_frequencies.resize(n_fft);
    spec.magnitudes.resize(n_fft);

    const auto half = static_cast<std::ptrdiff_t>(n_fft / 2);
    const double bin_hz = signal.sample_rate / static_cast<double>(n_fft);
    const double norm = 1.0 / static_cast<double>(n_sig);
    std::vector<cplx> twiddle(n_sig);
    for (std::size_t i = 0; i < n_fft; ++i) {
        const auto m = static_cast<std::ptrdiff_t>(i) - half;
        const double omega = -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n_fft);
        detail::fill_carrier(twiddle, omega);
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < n_sig; ++n) acc += signal.samples[n] * twiddle[n];
        spec.bin_frequencies[i] = static_cast<double>(m) * bin_hz;
        spec.magnitudes[i] = std::abs(acc) * norm;
    }
    return spec;
}

ModelParams initialize_from_spectrum(const ComplexSignal& segment, const ModelStructure& structure,
                                     const SpectralInitConfig& config) {
    validate(segment);
    validate(structure);
    const double nyquist = segment.sample_rate / 2.0;
    if (!(config.f0_search_lo > 0.0) || !(config.f0_search_lo < config.f0_search_hi) ||
        !(config.f0_search_hi < nyquist))
        throw ModelError("f0 search range must satisfy 0 < lo < hi < f_s/2");
    if (!(config.fc_search_lo > 0.0) || !(config.fc_search_lo < config.fc_search_hi))
        throw ModelError("fc search range must satisfy 0 < lo < hi");

    const Spectrum spec = dft_magnitude(segment, 4 * segment.size());
    const double floor = median(spec.magnitudes);

    const auto bins_in = [&](double lo, double hi, auto&& accept) {
        std::ptrdiff_t best = -1;
        for (std::size_t i = 0; i < spec.bin_frequencies.size(); ++i) {
            const double f = spec.bin_frequencies[i];
            if (f < lo || f > hi || !accept(i)) continue;
            if (best < 0 || spec.magnitudes[i] > spec.magnitudes[static_cast<std::size_t>(best)])
                best = static_cast<std::ptrdiff_t>(i);
        }
        return best;
    };

    // Fundamental: largest-magnitude bin inside the search window.
    const auto f0_bin = bins_in(config.f0_search_lo, config.f0_search_hi,
                                [](std::size_t) { return true; });
    if (f0_bin < 0 || spec.magnitudes[static_cast<std::size_t>(f0_bin)] <= floor)
        throw InitializationFailureError("no spectral peak above the median magnitude in the f0 "
                                         "search range");
    const double f0 = spec.bin_frequencies[static_cast<std::size_t>(f0_bin)];

    // Fault frequency: largest local maximum above f0. A plain largest-bin
    // rule would land on the fundamental's own mainlobe shoulder, so only
    // bins that beat both neighbours qualify. Models without
    // interharmonics get an arbitrary valid omegac; nothing depends on it.
    double fc = f0 / 2.0;
    if (!structure.interharmonic_indices.empty()) {
        const auto is_local_peak = [&](std::size_t i) {
            return i > 0 && i + 1 < spec.magnitudes.size() &&
                   spec.magnitudes[i] > spec.magnitudes[i - 1] &&
                   spec.magnitudes[i] > spec.magnitudes[i + 1];
        };
        const auto fc_bin =
            bins_in(f0 + config.fc_search_lo, f0 + config.fc_search_hi, is_local_peak);
        if (fc_bin < 0 || spec.magnitudes[static_cast<std::size_t>(fc_bin)] <= floor)
            throw InitializationFailureError("no spectral peak above the median magnitude in the "
                                             "fc search range");
        fc = spec.bin_frequencies[static_cast<std::size_t>(fc_bin)] - f0;
    }

    ModelParams params;
    params.omega0 = 2.0 * kPi * f0 / segment.sample_rate;
    params.omegac = 2.0 * kPi * fc / segment.sample_rate;
    params.phasors = solve_phasors_ls(segment, params.omega0, params.omegac, structure);
    try {
        validate(params, structure);
    } catch (const ModelError& e) {
        throw InitializationFailureError(std::string("spectral initialization produced invalid "
                                                     "parameters: ") +
                                         e.what());
    }
    return params;
}

} // namespace phasortrack
