#include "phasortrack/tracking.hpp"

#include <cmath>
#include <string>

namespace phasortrack {

SegmentSet segment_signal(const ComplexSignal& signal, std::size_t segment_length) {
    validate(signal);
    const std::size_t n = signal.size();
    if (segment_length == 0 || segment_length > n)
        throw InvalidSegmentLengthError("segment length " + std::to_string(segment_length) +
                                        " must lie in [1, " + std::to_string(n) + "]");

    SegmentSet set;
    set.segment_length = segment_length;
    const std::size_t n_segments = n / segment_length;
    set.dropped_tail = n - n_segments * segment_length;
    set.segments.reserve(n_segments);
    for (std::size_t s = 0; s < n_segments; ++s) {
        ComplexSignal seg;
        seg.sample_rate = signal.sample_rate;
        const auto begin = signal.samples.begin() + static_cast<std::ptrdiff_t>(s * segment_length);
        seg.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(segment_length));
        set.segments.push_back(std::move(seg));
    }
    return set;
}

ComponentDecomposition reconstruct_components(const ComplexSignal& segment,
                                              const ModelParams& params,
                                              const ModelStructure& structure) {
    validate(segment);
    validate(params, structure);

    const std::size_t m = segment.size();
    const auto blank = [&] {
        ComplexSignal s;
        s.sample_rate = segment.sample_rate;
        s.samples.assign(m, cplx{0.0, 0.0});
        return s;
    };

    ComponentDecomposition d{blank(), blank(), blank(), blank()};
    for (const auto& [key, omega] : frequency_grid(params, structure)) {
        ComplexSignal* bucket = nullptr;
        switch (key.kind) {
        case ComponentKey::Kind::Fundamental: bucket = &d.fundamental; break;
        case ComponentKey::Kind::Harmonic: bucket = &d.harmonic; break;
        case ComponentKey::Kind::Interharmonic: bucket = &d.interharmonic; break;
        }
        detail::accumulate_component(bucket->samples, params.phasors.at(key), omega);
    }
    for (std::size_t n = 0; n < m; ++n)
        d.residual.samples[n] = segment.samples[n] - (d.fundamental.samples[n] +
                                                      d.harmonic.samples[n] +
                                                      d.interharmonic.samples[n]);
    return d;
}

TrackingResult track(const ComplexSignal& signal, std::size_t segment_length,
                     const ModelStructure& structure, const EstimatorConfig& config,
                     const std::optional<ModelParams>& init,
                     const SpectralInitConfig& spectral) {
    const SegmentSet set = segment_signal(signal, segment_length);

    ModelParams current =
        init ? *init : initialize_from_spectrum(set.segments.front(), structure, spectral);

    TrackingResult result;
    result.per_segment.reserve(set.segments.size());
    for (std::size_t s = 0; s < set.segments.size(); ++s) {
        if (s > 0) {
            // Warm start: the previous estimate, with every phasor rotated
            // to this segment's local time origin.
            current = shift_time_origin(current, structure,
                                        static_cast<double>(set.segment_length));
        }
        EstimationTrace trace;
        try {
            trace = fit_segment(set.segments[s], current, structure, config);
        } catch (const DivergenceError& e) {
            throw DivergenceError("segment " + std::to_string(s) + ": " + e.what(), e.iteration,
                                  static_cast<int>(s));
        }
        current = trace.final_params;
        ComponentDecomposition decomposition =
            reconstruct_components(set.segments[s], current, structure);
        result.per_segment.push_back({current, std::move(trace), std::move(decomposition)});
    }
    return result;
}

ModelParams shift_time_origin(const ModelParams& params, const ModelStructure& structure,
                              double sample_offset) {
    ModelParams shifted = params;
    for (const auto& [key, omega] : frequency_grid(params, structure))
        shifted.phasors.at(key) *= std::polar(1.0, omega * sample_offset);
    return shifted;
}

} // namespace phasortrack
