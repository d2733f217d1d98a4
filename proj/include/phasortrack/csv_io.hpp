#ifndef PHASORTRACK_CSV_IO_HPP
#define PHASORTRACK_CSV_IO_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "phasortrack/spectral.hpp"
#include "phasortrack/tracking.hpp"
#include "phasortrack/validation.hpp"

namespace phasortrack {

/// Shortest text form that parses back to the identical double
/// (up to 17 significant digits).
std::string format_double(double value);

// Writers. All emit a fixed header row and %.17g values so that
// re-reading reproduces the records bit-exactly.

/// "index,real,imag"
void write_signal_csv(const std::filesystem::path& path, const ComplexSignal& signal);

/// "freq_hz,magnitude"
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

/// "iteration,loss" (iteration 0 = loss at the initial parameters)
void write_trace_csv(const std::filesystem::path& path, std::span<const double> loss_history);

/// "name,value_real,value_imag"; frequencies appear in Hz as f0_hz/fc_hz.
void write_params_csv(const std::filesystem::path& path, const ModelParams& params,
                      const ModelStructure& structure, double sample_rate);

/// "index,fundamental_real,...,residual_imag": one file per segment.
void write_decomposition_csv(const std::filesystem::path& path,
                             const ComponentDecomposition& decomposition);

/// "freq_hz,fundamental,harmonic,interharmonic,residual" magnitudes.
void write_decomposition_spectra_csv(const std::filesystem::path& path,
                                     const ComponentDecomposition& decomposition,
                                     std::size_t n_fft);

/// "segment,parameter,rmse,divergence_count"; frequency rows are reported
/// in Hz (f0_hz, fc_hz).
void write_montecarlo_csv(const std::filesystem::path& path, const MonteCarloReport& report,
                          double sample_rate);

// Readers.

ComplexSignal read_signal_csv(const std::filesystem::path& path, double sample_rate);
std::vector<double> read_trace_csv(const std::filesystem::path& path);

/// Generic numeric table: checks the exact header, parses every cell as
/// a double, reports malformed rows with their line number.
std::vector<std::vector<double>> read_csv_table(const std::filesystem::path& path,
                                                const std::string& expected_header);

} // namespace phasortrack

#endif // PHASORTRACK_CSV_IO_HPP
