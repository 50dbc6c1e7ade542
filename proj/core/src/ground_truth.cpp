#include "pitchml/ground_truth.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

// 95th percentile of |dEGG| over 200 ms blocks, evaluated on a coarse grid
// and held constant inside each block.
std::vector<double> block_percentiles(const std::vector<double>& abs_degg,
                                      int block_len) {
  const int n = static_cast<int>(abs_degg.size());
  const int n_blocks = (n + block_len - 1) / block_len;
  std::vector<double> p95(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<double> scratch;
  for (int b = 0; b < n_blocks; ++b) {
    // window centered on the block, one block of margin each side
    const int lo = std::max(0, (b - 1) * block_len);
    const int hi = std::min(n, (b + 2) * block_len);
    scratch.assign(abs_degg.begin() + lo, abs_degg.begin() + hi);
    const std::size_t k = static_cast<std::size_t>(0.95 * (scratch.size() - 1));
    std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end());
    p95[b] = scratch[k];
  }
  return p95;
}

}  // namespace

GciSequence degg_peaks(const Waveform& egg, const F0SearchRange& range,
                       const GroundTruthConfig& cfg) {
  if (egg.samples.size() < 3) return {};
  const int n = static_cast<int>(egg.samples.size()) - 1;
  std::vector<double> degg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) degg[i] = egg.samples[i + 1] - egg.samples[i];

  std::vector<double> abs_degg(degg.size());
  for (std::size_t i = 0; i < degg.size(); ++i) abs_degg[i] = std::abs(degg[i]);

  const int block_len =
      std::max(1, static_cast<int>(std::lround(cfg.percentile_window_ms * 1e-3 *
                                               egg.sample_rate)));
  std::vector<double> p95 = block_percentiles(abs_degg, block_len);

  GciSequence peaks;
  for (int i = 1; i + 1 < n; ++i) {
    if (degg[i] < degg[i - 1] || degg[i] <= degg[i + 1]) continue;  // local max
    // thr can be 0 for a sparse signal (isolated pulses in silence); any
    // strictly positive local maximum still counts there
    const double thr = cfg.peak_rel_threshold * p95[i / block_len];
    if (!(degg[i] > thr)) continue;
    peaks.push_back(i);
  }

  // merge peaks closer than one minimal period, keeping the larger
  const int min_gap = std::max(1, static_cast<int>(std::lround(egg.sample_rate / range.f0_max)));
  GciSequence merged;
  for (int64_t p : peaks) {
    if (!merged.empty() && p - merged.back() < min_gap) {
      if (degg[p] > degg[merged.back()]) merged.back() = p;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

ReferenceTrack gci_to_reference(const GciSequence& gcis, const FrameGrid& grid,
                                const F0SearchRange& range,
                                const GroundTruthConfig& cfg) {
  for (std::size_t i = 1; i < gcis.size(); ++i) {
    if (gcis[i] <= gcis[i - 1])
      throw ValidationError("GCI sequence must be strictly increasing");
  }

  struct Period {
    double midpoint;  // samples
    double length;    // samples
  };
  std::vector<Period> periods;
  periods.reserve(gcis.size());
  for (std::size_t i = 1; i < gcis.size(); ++i) {
    periods.push_back({0.5 * static_cast<double>(gcis[i - 1] + gcis[i]),
                       static_cast<double>(gcis[i] - gcis[i - 1])});
  }

  ReferenceTrack out;
  out.track.frames.resize(static_cast<std::size_t>(grid.n_frames));
  out.periods_used.assign(static_cast<std::size_t>(grid.n_frames), 0);

  std::size_t cursor = 0;
  for (int k = 0; k < grid.n_frames; ++k) {
    PitchFrame& f = out.track.frames[k];
    f.time_s = grid.frame_time_s(k);

    const double start = static_cast<double>(k) * grid.hop;
    const double stop = start + grid.frame_length;
    while (cursor < periods.size() && periods[cursor].midpoint < start) ++cursor;

    bool ok = true;
    double sum = 0.0;
    int count = 0;
    double prev_len = -1.0;
    for (std::size_t i = cursor; i < periods.size() && periods[i].midpoint < stop; ++i) {
      const double len = periods[i].length;
      const double f0 = grid.sample_rate / len;
      if (f0 < range.f0_min || f0 > range.f0_max) {
        ok = false;
        break;
      }
      if (prev_len > 0.0 &&
          std::abs(len - prev_len) / prev_len >= cfg.continuity_pct / 100.0) {
        ok = false;  // continuity gate
        break;
      }
      prev_len = len;
      sum += len;
      ++count;
    }

    if (ok && count > 0) {
      f.voiced = true;
      f.f0 = grid.sample_rate / (sum / count);
      out.periods_used[k] = count;
    }
  }
  return out;
}

}  // namespace pitchml
