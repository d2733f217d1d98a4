#include "phasortrack/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phasortrack {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

std::string ComponentKey::name() const {
    switch (kind) {
    case Kind::Fundamental: return "fundamental";
    case Kind::Harmonic: return "harmonic_" + std::to_string(index);
    case Kind::Interharmonic: return "interharmonic_" + std::to_string(index);
    }
    return "unknown";
}

std::vector<ComponentKey> ModelStructure::component_keys() const {
    std::vector<ComponentKey> keys;
    keys.reserve(component_count());
    keys.push_back(ComponentKey::fundamental());
    for (int l : harmonic_indices) keys.push_back(ComponentKey::harmonic(l));
    for (int k : interharmonic_indices) keys.push_back(ComponentKey::interharmonic(k));
    return keys;
}

ModelStructure make_structure(std::vector<int> harmonics, std::vector<int> interharmonics) {
    std::sort(harmonics.begin(), harmonics.end());
    std::sort(interharmonics.begin(), interharmonics.end());
    ModelStructure structure{std::move(harmonics), std::move(interharmonics)};
    validate(structure);
    return structure;
}

void validate(const ComplexSignal& signal) {
    if (signal.samples.empty()) throw ModelError("signal must contain at least one sample");
    if (!(signal.sample_rate > 0.0) || !std::isfinite(signal.sample_rate))
        throw ModelError("signal sample_rate must be positive and finite");
    for (cplx s : signal.samples)
        if (!finite(s)) throw ModelError("signal contains a non-finite sample");
}

void validate(const ModelStructure& structure) {
    const auto strictly_ascending = [](const std::vector<int>& v) {
        return std::adjacent_find(v.begin(), v.end(),
                                  [](int a, int b) { return a >= b; }) == v.end();
    };
    if (!strictly_ascending(structure.harmonic_indices))
        throw ModelError("harmonic indices must be distinct and ascending");
    if (!strictly_ascending(structure.interharmonic_indices))
        throw ModelError("interharmonic indices must be distinct and ascending");
    for (int l : structure.harmonic_indices)
        if (l < 2) throw ModelError("harmonic index " + std::to_string(l) + " is below 2");
    for (int k : structure.interharmonic_indices)
        if (k == 0) throw ModelError("interharmonic index 0 would duplicate the fundamental");
}

void validate(const ModelParams& params, const ModelStructure& structure) {
    validate(structure);
    if (!std::isfinite(params.omega0) || !(params.omega0 > 0.0) || !(params.omega0 < kPi))
        throw ModelError("omega0 must lie in (0, pi)");
    if (!std::isfinite(params.omegac) || !(params.omegac > 0.0) || !(params.omegac < params.omega0))
        throw ModelError("omegac must lie in (0, omega0)");

    const auto keys = structure.component_keys();
    if (params.phasors.size() != keys.size())
        throw ModelError("phasor map must hold exactly one entry per modeled component");
    for (const ComponentKey& key : keys) {
        auto it = params.phasors.find(key);
        if (it == params.phasors.end())
            throw ModelError("missing phasor for component " + key.name());
        if (!finite(it->second))
            throw ModelError("non-finite phasor for component " + key.name());
    }
    frequency_grid(params, structure); // throws if any modeled frequency escapes (-pi, pi)
}

cplx phasor_from_polar(double amplitude, double phase_rad) {
    return std::polar(amplitude, phase_rad);
}

std::vector<std::pair<ComponentKey, double>>
frequency_grid(const ModelParams& params, const ModelStructure& structure) {
    std::vector<std::pair<ComponentKey, double>> grid;
    grid.reserve(structure.component_count());
    grid.emplace_back(ComponentKey::fundamental(), params.omega0);
    for (int l : structure.harmonic_indices)
        grid.emplace_back(ComponentKey::harmonic(l), static_cast<double>(l) * params.omega0);
    for (int k : structure.interharmonic_indices)
        grid.emplace_back(ComponentKey::interharmonic(k),
                          params.omega0 + static_cast<double>(k) * params.omegac);

    for (const auto& [key, omega] : grid) {
        if (!std::isfinite(omega) || omega <= -kPi || omega >= kPi)
            throw FrequencyRangeError("component " + key.name() + " frequency " +
                                      std::to_string(omega) + " rad/sample is outside (-pi, pi)");
    }
    return grid;
}

namespace detail {

void fill_carrier(std::span<cplx> out, double omega) {
    const cplx step = std::polar(1.0, omega);
    cplx w = 1.0;
    for (std::size_t n = 0; n < out.size(); ++n) {
        if ((n & 0xFFu) == 0)
            w = std::polar(1.0, omega * static_cast<double>(n));
        out[n] = w;
        w *= step;
    }
}

void accumulate_component(std::span<cplx> acc, cplx phasor, double omega) {
    const cplx step = std::polar(1.0, omega);
    cplx w = phasor;
    for (std::size_t n = 0; n < acc.size(); ++n) {
        if ((n & 0xFFu) == 0)
            w = phasor * std::polar(1.0, omega * static_cast<double>(n));
        acc[n] += w;
        w *= step;
    }
}

double GaussianSource::uniform_open01() {
    // 53-bit mantissa from the top of the 64-bit word, shifted into (0, 1].
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform_open01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

} // namespace detail

Eigen::MatrixXcd build_vandermonde(std::span<const double> omegas, std::size_t n_samples) {
    if (n_samples == 0) throw EmptyInputError("vandermonde matrix needs at least one row");
    if (omegas.empty()) throw EmptyInputError("vandermonde matrix needs at least one frequency");

    Eigen::MatrixXcd v(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(omegas.size()));
    std::vector<cplx> column(n_samples);
    for (std::size_t c = 0; c < omegas.size(); ++c) {
        detail::fill_carrier(column, omegas[c]);
        for (std::size_t n = 0; n < n_samples; ++n)
            v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) = column[n];
    }
    return v;
}

ComplexSignal synthesize(const ModelParams& params, const ModelStructure& structure,
                         std::size_t n_samples, double sample_rate) {
    if (n_samples == 0) throw EmptyInputError("cannot synthesize an empty signal");
    if (!(sample_rate > 0.0)) throw ModelError("sample_rate must be positive");
    validate(params, structure);

    ComplexSignal out;
    out.sample_rate = sample_rate;
    out.samples.assign(n_samples, cplx{0.0, 0.0});
    for (const auto& [key, omega] : frequency_grid(params, structure))
        detail::accumulate_component(out.samples, params.phasors.at(key), omega);
    return out;
}

ComplexSignal add_noise(const ComplexSignal& signal, const NoiseSpec& noise) {
    validate(signal);
    if (!std::isfinite(noise.sigma) || noise.sigma < 0.0)
        throw ModelError("noise sigma must be finite and non-negative");

    ComplexSignal out = signal;
    detail::GaussianSource gauss(noise.seed);
    for (cplx& s : out.samples) {
        const double re = gauss.next();
        const double im = gauss.next();
        s += noise.sigma * cplx{re, im};
    }
    return out;
}

ReferenceSignal reference_signal(const NoiseSpec& noise) {
    constexpr double fs = 1000.0;
    constexpr std::size_t n = 1000;
    constexpr double f0 = 60.0;
    constexpr double fc = 5.0;

    ReferenceSignal ref;
    ref.structure = make_structure({2, 3, 4}, {1, 2, 3});
    ref.params.omega0 = 2.0 * kPi * f0 / fs;
    ref.params.omegac = 2.0 * kPi * fc / fs;
    ref.params.phasors = {
        {ComponentKey::fundamental(), phasor_from_polar(0.7, 0.0)},
        {ComponentKey::harmonic(2), phasor_from_polar(0.6, 0.0)},
        {ComponentKey::harmonic(3), phasor_from_polar(0.5, 0.0)},
        {ComponentKey::harmonic(4), phasor_from_polar(0.4, 0.0)},
        {ComponentKey::interharmonic(1), phasor_from_polar(0.3, 0.0)},
        {ComponentKey::interharmonic(2), phasor_from_polar(0.2, 0.0)},
        {ComponentKey::interharmonic(3), phasor_from_polar(0.1, 0.0)},
    };
    ref.signal = add_noise(synthesize(ref.params, ref.structure, n, fs), noise);
    return ref;
}

} // namespace phasortrack
