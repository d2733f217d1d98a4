#include "phasortrack/csv_io.hpp"

#include <charconv>
#include <numbers>
#include <cstdio>
#include <fstream>

namespace phasortrack {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw CsvParseError("cannot parse \"" + field + "\" as a number", line_no);
    return value;
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_signal_csv(const std::filesystem::path& path, const ComplexSignal& signal) {
    auto out = open_out(path);
    out << "index,real,imag\n";
    for (std::size_t n = 0; n < signal.size(); ++n)
        out << n << ',' << format_double(signal.samples[n].real()) << ','
            << format_double(signal.samples[n].imag()) << '\n';
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    auto out = open_out(path);
    out << "freq_hz,magnitude\n";
    for (std::size_t i = 0; i < spectrum.bin_frequencies.size(); ++i)
        out << format_double(spectrum.bin_frequencies[i]) << ','
            << format_double(spectrum.magnitudes[i]) << '\n';
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_trace_csv(const std::filesystem::path& path, std::span<const double> loss_history) {
    auto out = open_out(path);
    out << "iteration,loss\n";
    for (std::size_t i = 0; i < loss_history.size(); ++i)
        out << i << ',' << format_double(loss_history[i]) << '\n';
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_params_csv(const std::filesystem::path& path, const ModelParams& params,
                      const ModelStructure& structure, double sample_rate) {
    const double to_hz = sample_rate / (2.0 * std::numbers::pi);
    auto out = open_out(path);
    out << "name,value_real,value_imag\n";
    out << "f0_hz," << format_double(params.omega0 * to_hz) << ",0\n";
    out << "fc_hz," << format_double(params.omegac * to_hz) << ",0\n";
    for (const ComponentKey& key : structure.component_keys()) {
        const cplx c = params.phasors.at(key);
        out << key.name() << ',' << format_double(c.real()) << ',' << format_double(c.imag())
            << '\n';
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_decomposition_csv(const std::filesystem::path& path,
                             const ComponentDecomposition& decomposition) {
    auto out = open_out(path);
    out << "index,fundamental_real,fundamental_imag,harmonic_real,harmonic_imag,"
           "interharmonic_real,interharmonic_imag,residual_real,residual_imag\n";
    const std::size_t m = decomposition.fundamental.size();
    for (std::size_t n = 0; n < m; ++n) {
        out << n;
        for (const ComplexSignal* part : {&decomposition.fundamental, &decomposition.harmonic,
                                          &decomposition.interharmonic, &decomposition.residual})
            out << ',' << format_double(part->samples[n].real()) << ','
                << format_double(part->samples[n].imag());
        out << '\n';
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_decomposition_spectra_csv(const std::filesystem::path& path,
                                     const ComponentDecomposition& decomposition,
                                     std::size_t n_fft) {
    const Spectrum fund = dft_magnitude(decomposition.fundamental, n_fft);
    const Spectrum harm = dft_magnitude(decomposition.harmonic, n_fft);
    const Spectrum inter = dft_magnitude(decomposition.interharmonic, n_fft);
    const Spectrum resid = dft_magnitude(decomposition.residual, n_fft);

    auto out = open_out(path);
    out << "freq_hz,fundamental,harmonic,interharmonic,residual\n";
    for (std::size_t i = 0; i < fund.bin_frequencies.size(); ++i)
        out << format_double(fund.bin_frequencies[i]) << ',' << format_double(fund.magnitudes[i])
            << ',' << format_double(harm.magnitudes[i]) << ','
            << format_double(inter.magnitudes[i]) << ',' << format_double(resid.magnitudes[i])
            << '\n';
    if (!out) throw IoError("failed while writing " + path.string());
}

void write_montecarlo_csv(const std::filesystem::path& path, const MonteCarloReport& report,
                          double sample_rate) {
    const double to_hz = sample_rate / (2.0 * std::numbers::pi);
    auto out = open_out(path);
    out << "segment,parameter,rmse,divergence_count\n";
    for (std::size_t s = 0; s < report.per_segment.size(); ++s) {
        const SegmentRmse& seg = report.per_segment[s];
        out << s << ",f0_hz," << format_double(seg.omega0_rmse * to_hz) << ','
            << seg.divergence_count << '\n';
        out << s << ",fc_hz," << format_double(seg.omegac_rmse * to_hz) << ','
            << seg.divergence_count << '\n';
        for (const auto& [key, value] : seg.phasor_rmse)
            out << s << ',' << key.name() << ',' << format_double(value) << ','
                << seg.divergence_count << '\n';
    }
    if (!out) throw IoError("failed while writing " + path.string());
}

std::vector<std::vector<double>> read_csv_table(const std::filesystem::path& path,
                                                const std::string& expected_header) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw CsvParseError("missing header row", 1);
    if (line != expected_header)
        throw CsvParseError("header \"" + line + "\" does not match \"" + expected_header + "\"",
                            1);
    const std::size_t n_cols = split_fields(expected_header).size();

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != n_cols)
            throw CsvParseError("expected " + std::to_string(n_cols) + " fields, found " +
                                    std::to_string(fields.size()),
                                line_no);
        std::vector<double> row;
        row.reserve(n_cols);
        for (const std::string& f : fields) row.push_back(parse_double(f, line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexSignal read_signal_csv(const std::filesystem::path& path, double sample_rate) {
    ComplexSignal signal;
    signal.sample_rate = sample_rate;
    for (const auto& row : read_csv_table(path, "index,real,imag"))
        signal.samples.emplace_back(row[1], row[2]);
    validate(signal);
    return signal;
}

std::vector<double> read_trace_csv(const std::filesystem::path& path) {
    std::vector<double> losses;
    for (const auto& row : read_csv_table(path, "iteration,loss")) losses.push_back(row[1]);
    return losses;
}

} // namespace phasortrack
