#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pitchml {

// Per-frame pitch contour on the 5 ms grid. f0 is present iff the frame is
// voiced. Used both for predictions and for EGG-derived references.
struct PitchFrame {
  double time_s = 0.0;
  bool voiced = false;
  std::optional<double> f0;
};

struct PitchTrack {
  std::vector<PitchFrame> frames;

  int n_frames() const { return static_cast<int>(frames.size()); }
};

// CSV columns: time_s, voiced (0/1), f0_hz (empty when unvoiced).
// Values round-trip bit-exactly through save/load.
void save_track_csv(const std::string& path, const PitchTrack& t);
PitchTrack load_track_csv(const std::string& path);

}  // namespace pitchml
