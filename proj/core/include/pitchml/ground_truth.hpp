#pragma once

#include <cstdint>
#include <vector>

#include "pitchml/features.hpp"
#include "pitchml/framing.hpp"
#include "pitchml/pitch_track.hpp"
#include "pitchml/waveform.hpp"

namespace pitchml {

// Glottal closure instants as strictly increasing sample indices.
using GciSequence = std::vector<int64_t>;

struct GroundTruthConfig {
  double peak_rel_threshold = 0.2;   // vs 95th percentile of |dEGG|
  double percentile_window_ms = 200; // sliding normalization window
  double continuity_pct = 25.0;      // max relative jump between periods
};

// Peak picking on the differenced EGG. Peaks closer than 1/f0_max merge,
// keeping the larger. A flat EGG gives an empty sequence (fully unvoiced).
GciSequence degg_peaks(const Waveform& egg, const F0SearchRange& range,
                       const GroundTruthConfig& cfg = {});

struct ReferenceTrack {
  PitchTrack track;
  std::vector<int> periods_used;  // per-frame provenance
};

// Frame is voiced iff >= 1 inter-GCI period has its midpoint inside the
// frame, every such period maps into the F0 range, and adjacent periods
// differ by less than the continuity gate. f0 = sample_rate / mean period.
ReferenceTrack gci_to_reference(const GciSequence& gcis, const FrameGrid& grid,
                                const F0SearchRange& range,
                                const GroundTruthConfig& cfg = {});

}  // namespace pitchml
