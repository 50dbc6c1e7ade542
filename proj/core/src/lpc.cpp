#include "pitchml/lpc.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

LevinsonResult levinson_durbin(const std::vector<double>& autocorr, int order) {
  if (static_cast<int>(autocorr.size()) < order + 1)
    throw ValidationError("levinson_durbin needs r[0..order]");
  LevinsonResult res;
  res.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
  if (autocorr[0] <= 0.0) return res;  // silent frame, zero predictor

  double err = autocorr[0];
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> prev(a);
  for (int m = 1; m <= order; ++m) {
    double acc = autocorr[m];
    for (int i = 1; i < m; ++i) acc -= a[i] * autocorr[m - i];
    if (err <= 0.0) {
      res.stable = false;
      break;
    }
    const double k = acc / err;
    if (std::abs(k) >= 1.0) res.stable = false;
    prev = a;
    a[m] = k;
    for (int i = 1; i < m; ++i) a[i] = prev[i] - k * prev[m - i];
    err *= (1.0 - k * k);
  }
  res.coeffs = a;
  return res;
}

LpResidual lp_residual(const Waveform& w) {
  LpResidual out;
  out.samples.assign(w.samples.size(), 0.0);
  if (w.samples.empty()) return out;

  const FrameGrid grid = make_frame_grid(w.sample_rate, w.samples.size());
  const int order = static_cast<int>(std::lround(w.sample_rate / 1000.0)) + 2;
  const int len = grid.frame_length;

  std::vector<double> overlap(w.samples.size(), 0.0);
  std::vector<double> xw(static_cast<std::size_t>(len));
  std::vector<double> r(static_cast<std::size_t>(order) + 1);

  for (int k = 0; k < grid.n_frames; ++k) {
    std::vector<double> raw = raw_frame(w.samples, grid, k);
    for (int n = 0; n < len; ++n) xw[n] = raw[n] * grid.window[n];

    for (int i = 0; i <= order; ++i) {
      double s = 0.0;
      for (int n = i; n < len; ++n) s += xw[n] * xw[n - i];
      r[i] = s;
    }

    LevinsonResult lev = levinson_durbin(r, order);
    const bool pass_through = !lev.stable;
    if (pass_through) ++out.unstable_frames;

    const std::size_t start = static_cast<std::size_t>(k) * grid.hop;
    for (int n = 0; n < len; ++n) {
      std::size_t idx = start + n;
      if (idx >= w.samples.size()) break;
      double e = xw[n];
      if (!pass_through) {
        for (int i = 1; i <= order && i <= n; ++i) e -= lev.coeffs[i] * xw[n - i];
      }
      out.samples[idx] += e;
      overlap[idx] += grid.window[n];
    }
  }

  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] /= std::max(overlap[i], 1e-6);
  }
  return out;
}

}  // namespace pitchml
