#ifndef PHASORTRACK_TRACKING_HPP
#define PHASORTRACK_TRACKING_HPP

#include <optional>
#include <vector>

#include "phasortrack/estimation.hpp"
#include "phasortrack/spectral.hpp"
#include "phasortrack/signal_model.hpp"

namespace phasortrack {

/// Consecutive non-overlapping segments of equal length; any remainder
/// samples are dropped and counted.
struct SegmentSet {
    std::vector<ComplexSignal> segments;
    std::size_t segment_length = 0;
    std::size_t dropped_tail = 0;
};

SegmentSet segment_signal(const ComplexSignal& signal, std::size_t segment_length);

/// The four-way split of one segment. The residual is the exact
/// difference, so the parts always sum back to the segment.
struct ComponentDecomposition {
    ComplexSignal fundamental;
    ComplexSignal harmonic;
    ComplexSignal interharmonic;
    ComplexSignal residual;
};

ComponentDecomposition reconstruct_components(const ComplexSignal& segment,
                                              const ModelParams& params,
                                              const ModelStructure& structure);

struct SegmentResult {
    ModelParams params;
    EstimationTrace trace;
    ComponentDecomposition decomposition;
};

struct TrackingResult {
    std::vector<SegmentResult> per_segment;
};

/// Segments the signal, fits each segment (warm-starting from the
/// previous estimate), and decomposes it. The first segment starts from
/// `init` when given, otherwise from spectral initialization.
TrackingResult track(const ComplexSignal& signal, std::size_t segment_length,
                     const ModelStructure& structure, const EstimatorConfig& config,
                     const std::optional<ModelParams>& init = {},
                     const SpectralInitConfig& spectral = {});

/// Rotates every phasor by e^{j w_u * sample_offset}: the parameters that
/// describe the same waveform when the time origin moves back by
/// `sample_offset` samples. Segment s of a stationary signal is governed
/// by shift_time_origin(params, structure, s * M).
ModelParams shift_time_origin(const ModelParams& params, const ModelStructure& structure,
                              double sample_offset);

} // namespace phasortrack

#endif // PHASORTRACK_TRACKING_HPP
