#pragma once

#include <vector>

#include "pitchml/waveform.hpp"

namespace pitchml {

// 30 ms Hanning frames with a 5 ms hop. Frame k covers samples
// [k*hop, k*hop + frame_length); tail frames are zero-padded so the grid
// length depends only on the signal length.
struct FrameGrid {
  int frame_length = 0;  // round(0.030 * sample_rate)
  int hop = 0;           // round(0.005 * sample_rate)
  int n_frames = 0;
  int sample_rate = 0;
  std::vector<double> window;  // Hanning, frame_length coefficients

  double frame_time_s(int k) const { return k * 0.005; }
};

FrameGrid make_frame_grid(int sample_rate, std::size_t n_samples);

struct FramedSignal {
  FrameGrid grid;
  // n_frames rows of frame_length windowed samples.
  std::vector<std::vector<double>> frames;
};

// Throws ValidationError for an empty waveform.
FramedSignal frame_signal(const Waveform& w);

// Same framing applied to a raw sample buffer (no window), used by the
// inverse-filtering pass which windows internally.
std::vector<double> raw_frame(const std::vector<double>& samples,
                              const FrameGrid& grid, int frame_index);

}  // namespace pitchml
