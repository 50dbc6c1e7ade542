#include "pitchml/framing.hpp"

#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

FrameGrid make_frame_grid(int sample_rate, std::size_t n_samples) {
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  if (n_samples == 0) throw ValidationError("cannot frame an empty waveform");
  FrameGrid g;
  g.sample_rate = sample_rate;
  g.frame_length = static_cast<int>(std::lround(0.030 * sample_rate));
  g.hop = static_cast<int>(std::lround(0.005 * sample_rate));
  g.n_frames = static_cast<int>((n_samples + g.hop - 1) / g.hop);
  g.window.resize(g.frame_length);
  for (int n = 0; n < g.frame_length; ++n) {
    g.window[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / (g.frame_length - 1));
  }
  return g;
}

FramedSignal frame_signal(const Waveform& w) {
  FramedSignal out;
  out.grid = make_frame_grid(w.sample_rate, w.samples.size());
  const FrameGrid& g = out.grid;
  out.frames.assign(g.n_frames, std::vector<double>(g.frame_length, 0.0));
  const std::size_t len = w.samples.size();
  for (int k = 0; k < g.n_frames; ++k) {
    const std::size_t start = static_cast<std::size_t>(k) * g.hop;
    for (int n = 0; n < g.frame_length; ++n) {
      std::size_t idx = start + n;
      if (idx >= len) break;
      out.frames[k][n] = w.samples[idx] * g.window[n];
    }
  }
  return out;
}

std::vector<double> raw_frame(const std::vector<double>& samples,
                              const FrameGrid& grid, int frame_index) {
  std::vector<double> frame(grid.frame_length, 0.0);
  const std::size_t start = static_cast<std::size_t>(frame_index) * grid.hop;
  for (int n = 0; n < grid.frame_length; ++n) {
    std::size_t idx = start + n;
    if (idx >= samples.size()) break;
    frame[n] = samples[idx];
  }
  return frame;
}

}  // namespace pitchml
