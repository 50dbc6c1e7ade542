#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pitchml/framing.hpp"
#include "pitchml/ground_truth.hpp"
#include "test_util.hpp"

using namespace pitchml;
using namespace testutil;

namespace {

constexpr int kFs = 16000;
const F0SearchRange kRange{};

// Sawtooth pseudo-EGG: 1 at each closure instant, linear decay to the next.
Waveform sawtooth_egg(const std::vector<int64_t>& gcis, int n) {
  std::vector<double> egg(n, 0.0);
  for (std::size_t i = 0; i + 1 < gcis.size(); ++i) {
    for (int64_t s = gcis[i]; s < gcis[i + 1] && s < n; ++s) {
      egg[s] = 1.0 - static_cast<double>(s - gcis[i]) / (gcis[i + 1] - gcis[i]);
    }
  }
  return {egg, kFs};
}

std::vector<int64_t> uniform_gcis(int spacing, int n) {
  std::vector<int64_t> g;
  for (int64_t s = spacing; s + spacing < n; s += spacing) g.push_back(s);
  return g;
}

}  // namespace

TEST_CASE("degg peak picking") {
  SUBCASE("sawtooth pulses at 10 ms spacing recover the onsets") {
    const int n = kFs;  // 1 s
    auto truth = uniform_gcis(160, n);  // 100 Hz
    GciSequence found = degg_peaks(sawtooth_egg(truth, n), kRange);
    REQUIRE(found.size() >= truth.size() - 2);
    // every detected GCI within 1 sample of a true one
    for (int64_t f : found) {
      int64_t best = 1 << 30;
      for (int64_t t : truth) best = std::min<int64_t>(best, std::llabs(f - t));
      CHECK(best <= 1);
    }
  }
  SUBCASE("zero signal gives an empty sequence") {
    Waveform flat{std::vector<double>(kFs, 0.0), kFs};
    CHECK(degg_peaks(flat, kRange).empty());
    Waveform constant{std::vector<double>(kFs, 0.7), kFs};
    CHECK(degg_peaks(constant, kRange).empty());
  }
  SUBCASE("one isolated pulse gives one gci") {
    std::vector<double> egg(kFs, 0.0);
    for (int i = 8000; i < 8100; ++i) egg[i] = 1.0 - (i - 8000) / 100.0;
    GciSequence found = degg_peaks({egg, kFs}, kRange);
    REQUIRE(found.size() == 1);
    CHECK(std::llabs(found[0] - 8000) <= 1);
  }
  SUBCASE("invariant under positive scaling") {
    const int n = kFs;
    auto truth = uniform_gcis(145, n);
    Waveform egg = sawtooth_egg(truth, n);
    Waveform scaled = egg;
    for (double& v : scaled.samples) v *= 37.5;
    CHECK(degg_peaks(egg, kRange) == degg_peaks(scaled, kRange));
  }
  SUBCASE("peaks closer than the minimum period are merged") {
    std::vector<double> egg(kFs, 0.0);
    // two spikes 10 samples apart: far below fs/f0_max = 40 samples
    egg[4000] = 1.0;
    egg[4010] = 0.8;
    egg[4011] = 0.0;
    GciSequence found = degg_peaks({egg, kFs}, kRange);
    CHECK(found.size() == 1);
  }
}

TEST_CASE("gci to reference") {
  SUBCASE("uniform 8 ms spacing gives 125 Hz interior frames") {
    const int n = 2 * kFs;
    auto gcis = uniform_gcis(128, n);  // 8 ms at 16 kHz
    FrameGrid grid = make_frame_grid(kFs, n);
    ReferenceTrack ref = gci_to_reference(gcis, grid, kRange);
    REQUIRE(ref.track.n_frames() == grid.n_frames);
    int voiced = 0;
    for (int k = 5; k < grid.n_frames - 5; ++k) {
      const auto& fr = ref.track.frames[k];
      if (!fr.voiced) continue;
      ++voiced;
      CHECK(*fr.f0 == doctest::Approx(125.0).epsilon(0.004));
    }
    CHECK(voiced > grid.n_frames / 2);
  }
  SUBCASE("no gcis means all unvoiced") {
    FrameGrid grid = make_frame_grid(kFs, kFs);
    ReferenceTrack ref = gci_to_reference({}, grid, kRange);
    for (const auto& fr : ref.track.frames) CHECK_FALSE(fr.voiced);
  }
  SUBCASE("period jump trips the continuity gate") {
    // 8 ms spacing, then an abrupt switch to 20 ms
    std::vector<int64_t> gcis;
    int64_t pos = 1000;
    for (int i = 0; i < 40; ++i) gcis.push_back(pos += 128);
    for (int i = 0; i < 40; ++i) gcis.push_back(pos += 320);
    const int n = static_cast<int>(pos + 2000);
    FrameGrid grid = make_frame_grid(kFs, n);
    ReferenceTrack ref = gci_to_reference(gcis, grid, kRange);
    // the frame containing the transition period must be unvoiced
    const int64_t transition = 1000 + 40 * 128;
    bool saw_unvoiced_transition = false;
    for (int k = 0; k < grid.n_frames; ++k) {
      const int64_t start = static_cast<int64_t>(k) * grid.hop;
      const int64_t mid_lo = transition;
      const int64_t mid_hi = transition + 320;
      const int64_t midpoint = (mid_lo + mid_hi) / 2;
      if (midpoint >= start && midpoint < start + grid.frame_length) {
        if (!ref.track.frames[k].voiced) saw_unvoiced_transition = true;
      }
    }
    CHECK(saw_unvoiced_transition);
    // away from the transition both regimes are voiced at their own rate
    bool saw125 = false, saw50 = false;
    for (const auto& fr : ref.track.frames) {
      if (!fr.voiced) continue;
      if (std::abs(*fr.f0 - 125.0) < 1.0) saw125 = true;
      if (std::abs(*fr.f0 - 50.0) < 1.0) saw50 = true;
    }
    CHECK(saw125);
    CHECK_FALSE(saw50);  // 50 Hz is outside the search range -> unvoiced
  }
  SUBCASE("reference f0 always inside the search range") {
    std::vector<int64_t> gcis;
    int64_t pos = 0;
    // spacings sweeping from far too long to far too short
    for (int spacing = 400; spacing >= 20; spacing -= 7) gcis.push_back(pos += spacing);
    FrameGrid grid = make_frame_grid(kFs, static_cast<int>(pos + 1000));
    ReferenceTrack ref = gci_to_reference(gcis, grid, kRange);
    for (const auto& fr : ref.track.frames) {
      if (!fr.voiced) continue;
      CHECK(*fr.f0 >= kRange.f0_min);
      CHECK(*fr.f0 <= kRange.f0_max);
    }
  }
}
