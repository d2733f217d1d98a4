#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phasortrack/tracking.hpp"

#include "helpers.hpp"

using namespace phasortrack;
using phasortrack::testing::TestRng;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

EstimatorConfig concentrated_config() {
    EstimatorConfig config;
    config.mode = FitMode::ConcentratedGd;
    return config;
}

} // namespace

TEST_CASE("segment_signal splits the reference signal into four segments") {
    const auto ref = reference_signal({0.25, 41});
    const SegmentSet set = segment_signal(ref.signal, 250);
    CHECK(set.segments.size() == 4);
    CHECK(set.dropped_tail == 0);
    for (const ComplexSignal& seg : set.segments) {
        CHECK(seg.size() == 250);
        CHECK(seg.sample_rate == ref.signal.sample_rate);
    }
}

TEST_CASE("segment_signal with M = N returns the whole signal") {
    const auto ref = reference_signal({0.0, 0});
    const SegmentSet set = segment_signal(ref.signal, 1000);
    REQUIRE(set.segments.size() == 1);
    CHECK(set.segments[0].samples == ref.signal.samples);
    CHECK(set.dropped_tail == 0);
}

TEST_CASE("segment_signal drops the remainder and reports it") {
    const auto ref = reference_signal({0.0, 0});
    const SegmentSet set = segment_signal(ref.signal, 300);
    CHECK(set.segments.size() == 3);
    CHECK(set.dropped_tail == 100);
}

TEST_CASE("segmentation is lossless up to the dropped tail") {
    const auto ref = reference_signal({0.25, 43});
    const SegmentSet set = segment_signal(ref.signal, 300);
    std::size_t n = 0;
    for (const ComplexSignal& seg : set.segments)
        for (const cplx& s : seg.samples) CHECK(s == ref.signal.samples[n++]);
    CHECK(n == ref.signal.size() - set.dropped_tail);
}

TEST_CASE("segment_signal rejects invalid lengths") {
    const auto ref = reference_signal({0.0, 0});
    CHECK_THROWS_AS(segment_signal(ref.signal, 0), InvalidSegmentLengthError);
    CHECK_THROWS_AS(segment_signal(ref.signal, 1001), InvalidSegmentLengthError);
}

TEST_CASE("reconstruction with exact parameters leaves no residual") {
    const auto ref = reference_signal({0.0, 0});
    const ComplexSignal segment = segment_signal(ref.signal, 250).segments.front();
    const ComponentDecomposition d = reconstruct_components(segment, ref.params, ref.structure);
    for (const cplx& r : d.residual.samples) CHECK(std::abs(r) <= 1e-12);
}

TEST_CASE("decomposition parts always sum back to the segment") {
    const auto ref = reference_signal({0.25, 47});
    const ComplexSignal segment = segment_signal(ref.signal, 250).segments[2];
    TestRng rng(61);
    const ModelParams arbitrary =
        phasortrack::testing::random_point(rng, ref.structure);
    const ComponentDecomposition d = reconstruct_components(segment, arbitrary, ref.structure);
    for (std::size_t n = 0; n < segment.size(); ++n) {
        const cplx sum = d.fundamental.samples[n] + d.harmonic.samples[n] +
                         d.interharmonic.samples[n] + d.residual.samples[n];
        CHECK(std::abs(sum - segment.samples[n]) <= 1e-12);
    }
}

TEST_CASE("the reconstructed fundamental has the reference amplitude") {
    const auto ref = reference_signal({0.0, 0});
    const ComplexSignal segment = segment_signal(ref.signal, 250).segments.front();
    const ComponentDecomposition d = reconstruct_components(segment, ref.params, ref.structure);
    for (const cplx& s : d.fundamental.samples) CHECK(std::abs(s) == Approx(0.7).epsilon(1e-12));
}

TEST_CASE("tracking a clean stationary signal recovers the truth in every segment") {
    const auto ref = reference_signal({0.0, 0});
    const TrackingResult result =
        track(ref.signal, 250, ref.structure, concentrated_config(), ref.params);
    REQUIRE(result.per_segment.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) {
        const SegmentResult& seg = result.per_segment[s];
        CHECK(std::abs(seg.params.omega0 - ref.params.omega0) < 1e-6);
        CHECK(std::abs(seg.params.omegac - ref.params.omegac) < 1e-6);
        const ModelParams local_truth =
            shift_time_origin(ref.params, ref.structure, static_cast<double>(s) * 250.0);
        for (const auto& [key, c] : local_truth.phasors)
            CHECK(std::abs(seg.params.phasors.at(key) - c) < 1e-6);
        double residual_energy = 0.0;
        for (const cplx& r : seg.decomposition.residual.samples)
            residual_energy += std::norm(r);
        CHECK(residual_energy <= 1e-12);
    }
}

TEST_CASE("the residual of a noisy track absorbs the injected noise energy") {
    const auto ref = reference_signal({0.25, 51});
    const TrackingResult result = track(ref.signal, 250, ref.structure, concentrated_config());
    REQUIRE(result.per_segment.size() == 4);
    for (const SegmentResult& seg : result.per_segment) {
        double mean_square = 0.0;
        for (const cplx& r : seg.decomposition.residual.samples) mean_square += std::norm(r);
        mean_square /= static_cast<double>(seg.decomposition.residual.size());
        CHECK(mean_square > 0.125 * 0.7);
        CHECK(mean_square < 0.125 * 1.3);
    }
}

TEST_CASE("warm-started segments agree with the first segment's estimate") {
    const auto ref = reference_signal({0.25, 53});
    const TrackingResult result = track(ref.signal, 250, ref.structure, concentrated_config());
    const double e0 = std::abs(result.per_segment[0].params.omega0 - ref.params.omega0);
    for (std::size_t s = 1; s < result.per_segment.size(); ++s) {
        const double spread =
            std::abs(result.per_segment[s].params.omega0 - result.per_segment[0].params.omega0);
        CHECK(spread < 10.0 * e0 + 1e-9);
    }
}

TEST_CASE("shift_time_origin re-expresses the same waveform") {
    const auto ref = reference_signal({0.0, 0});
    const std::size_t m = 250;
    const ComplexSignal full = synthesize(ref.params, ref.structure, 2 * m, 1000.0);
    const ModelParams shifted =
        shift_time_origin(ref.params, ref.structure, static_cast<double>(m));
    const ComplexSignal local = synthesize(shifted, ref.structure, m, 1000.0);
    for (std::size_t n = 0; n < m; ++n)
        CHECK(std::abs(local.samples[n] - full.samples[m + n]) <= 1e-12);
}

TEST_CASE("divergence during tracking names the failing segment") {
    const auto ref = reference_signal({0.25, 59});
    EstimatorConfig config;
    config.alpha = 1e30;
    config.freq_precondition = false;
    try {
        track(ref.signal, 250, ref.structure, config, ref.params);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.segment == 0);
        CHECK(e.iteration >= 1);
    }
}
