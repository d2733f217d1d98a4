#ifndef PHASORTRACK_SPECTRAL_HPP
#define PHASORTRACK_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "phasortrack/signal_model.hpp"

namespace phasortrack {

/// Centered magnitude spectrum: bins cover [-f_s/2, f_s/2) in ascending
/// order, magnitudes normalized by the signal length so a unit-amplitude
/// bin-aligned tone reads 1.
struct Spectrum {
    std::vector<double> bin_frequencies; // Hz, strictly increasing
    std::vector<double> magnitudes;
    std::size_t n_fft = 0;
};

/// Plain rectangular-window DFT, zero-padded to n_fft.
Spectrum dft_magnitude(const ComplexSignal& signal, std::size_t n_fft);

/// Search windows for spectrum-based initialization. fc bounds are
/// offsets above the located fundamental.
struct SpectralInitConfig {
    double f0_search_lo = 40.0; // Hz
    double f0_search_hi = 80.0; // Hz
    double fc_search_lo = 1.0;  // Hz above f0
    double fc_search_hi = 20.0; // Hz above f0
};

/// First-segment initialization: f0 from the largest bin in the f0
/// window (4x zero-padded for sub-bin granularity), fc from the spacing
/// to the largest local peak above f0, phasors from the least-squares
/// solve at those frequencies.
ModelParams initialize_from_spectrum(const ComplexSignal& segment, const ModelStructure& structure,
                                     const SpectralInitConfig& config = {});

} // namespace phasortrack

#endif // PHASORTRACK_SPECTRAL_HPP
