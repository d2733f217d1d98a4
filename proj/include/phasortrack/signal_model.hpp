#ifndef PHASORTRACK_SIGNAL_MODEL_HPP
#define PHASORTRACK_SIGNAL_MODEL_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phasortrack/errors.hpp"

namespace phasortrack {

using cplx = std::complex<double>;

/// Identifies one spectral component of the current model.
///
/// The ordering (fundamental, then harmonics by index, then
/// interharmonics by index) is the canonical component order used by
/// every operation that walks a model.
struct ComponentKey {
    enum class Kind : int { Fundamental = 0, Harmonic = 1, Interharmonic = 2 };

    Kind kind = Kind::Fundamental;
    int index = 1; // 1 for the fundamental, l >= 2 for harmonics, k != 0 for interharmonics

    static constexpr ComponentKey fundamental() { return {Kind::Fundamental, 1}; }
    static constexpr ComponentKey harmonic(int l) { return {Kind::Harmonic, l}; }
    static constexpr ComponentKey interharmonic(int k) { return {Kind::Interharmonic, k}; }

    /// Stable text id: "fundamental", "harmonic_3", "interharmonic_-1".
    std::string name() const;

    friend auto operator<=>(const ComponentKey&, const ComponentKey&) = default;
};

using PhasorMap = std::map<ComponentKey, cplx>;

/// Uniformly sampled complex current. Samples are in amperes.
struct ComplexSignal {
    std::vector<cplx> samples;
    double sample_rate = 0.0; // Hz

    std::size_t size() const { return samples.size(); }
};

/// Which harmonic multiples l and interharmonic offsets k are modeled.
/// The fundamental (index 1) is implicit and always present.
struct ModelStructure {
    std::vector<int> harmonic_indices;      // strictly ascending, each >= 2
    std::vector<int> interharmonic_indices; // strictly ascending, nonzero

    std::size_t component_count() const {
        return 1 + harmonic_indices.size() + interharmonic_indices.size();
    }
    std::vector<ComponentKey> component_keys() const;
};

/// Sorts the index sets and validates them.
ModelStructure make_structure(std::vector<int> harmonics, std::vector<int> interharmonics);

/// The estimated quadruple: both normalized angular frequencies plus one
/// complex phasor per modeled component.
struct ModelParams {
    double omega0 = 0.0; // rad/sample, fundamental
    double omegac = 0.0; // rad/sample, fault characteristic
    PhasorMap phasors;   // amperes
};

/// Additive complex white Gaussian noise: independent real/imaginary
/// channels, each with standard deviation `sigma`.
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

void validate(const ComplexSignal& signal);
void validate(const ModelStructure& structure);
void validate(const ModelParams& params, const ModelStructure& structure);

/// c = A * e^{j*phi}
cplx phasor_from_polar(double amplitude, double phase_rad);

/// Angular frequency of every modeled component in canonical order:
/// omega0, then l*omega0 per harmonic, then omega0 + k*omegac per
/// interharmonic. Throws FrequencyRangeError if any result leaves
/// (-pi, pi).
std::vector<std::pair<ComponentKey, double>>
frequency_grid(const ModelParams& params, const ModelStructure& structure);

/// N x L matrix with entry (n, l) = e^{j * omegas[l] * n}.
Eigen::MatrixXcd build_vandermonde(std::span<const double> omegas, std::size_t n_samples);

/// Evaluates the model: sample n = sum over components of c_u * e^{j w_u n}.
ComplexSignal synthesize(const ModelParams& params, const ModelStructure& structure,
                         std::size_t n_samples, double sample_rate);

/// Adds seeded complex Gaussian noise. Pure: same inputs, bit-identical output.
ComplexSignal add_noise(const ComplexSignal& signal, const NoiseSpec& noise);

struct ReferenceSignal {
    ComplexSignal signal;
    ModelParams params;    // ground truth used for synthesis
    ModelStructure structure;
};

/// The standard validation signal: f_s = 1000 Hz, N = 1000, 60 Hz
/// fundamental (0.7 A), harmonics {2,3,4} at [0.6, 0.5, 0.4] A,
/// interharmonics {1,2,3} with f_c = 5 Hz at [0.3, 0.2, 0.1] A, all
/// phases zero, plus noise per `noise`.
ReferenceSignal reference_signal(const NoiseSpec& noise);

namespace detail {

/// out[n] = e^{j * omega * n}. Uses an incremental rotation with periodic
/// resynchronization so the modulus drift stays ~1e-14 for any length.
void fill_carrier(std::span<cplx> out, double omega);

/// acc[n] += phasor * e^{j * omega * n}
void accumulate_component(std::span<cplx> acc, cplx phasor, double omega);

/// Deterministic standard-normal stream (Box-Muller over raw mt19937_64
/// bits); identical output on every platform for a given seed.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform_open01();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace detail

} // namespace phasortrack

#endif // PHASORTRACK_SIGNAL_MODEL_HPP
