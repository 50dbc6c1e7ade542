#pragma once

#include <vector>

#include "pitchml/framing.hpp"
#include "pitchml/waveform.hpp"

namespace pitchml {

struct LevinsonResult {
  // Predictor coefficients indexed 1..order (coeffs[0] is unused and 0),
  // x_hat[n] = sum_{i=1..order} coeffs[i] x[n-i]. Size is order + 1.
  std::vector<double> coeffs;
  bool stable = true;  // false if any reflection coefficient left [-1, 1]
};

// Solves the autocorrelation normal equations. autocorr holds r[0..order].
LevinsonResult levinson_durbin(const std::vector<double>& autocorr, int order);

struct LpResidual {
  std::vector<double> samples;  // same length as the input
  int unstable_frames = 0;      // frames that fell back to pass-through
};

// Frame-wise LPC inverse filtering with overlap-add, order
// round(sample_rate/1000) + 2. Unstable frames pass through unfiltered.
LpResidual lp_residual(const Waveform& w);

}  // namespace pitchml
