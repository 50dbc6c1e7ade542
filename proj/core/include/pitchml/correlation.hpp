#pragma once

#include <vector>

namespace pitchml {

// Lag bounds in samples, inclusive.
struct LagRange {
  int lag_min = 1;
  int lag_max = 1;
};

// Both periodicity curves over the lag range, sharing one FFT-based
// cross-correlation pass.
struct CorrelationCurves {
  int lag_min = 0;
  std::vector<double> ac;    // normalized autocorrelation, in [-1, 1]
  std::vector<double> nsdf;  // 2*cross / (energy sum), in [-1, 1]
};

CorrelationCurves correlation_curves(const std::vector<double>& frame,
                                     const LagRange& lags);

// Normalized autocorrelation over the overlapping region:
//   AC(tau) = sum x[n] x[n+tau] / sqrt(sum x[n]^2 * sum x[n+tau]^2)
// One value per lag in [lag_min, lag_max]. All-zero frames give an all-zero
// curve. Throws ValidationError if lag_max >= frame length.
std::vector<double> normalized_autocorrelation(const std::vector<double>& frame,
                                               const LagRange& lags);

// NSDF-style curve: 2 * sum x[n] x[n+tau] / sum (x[n]^2 + x[n+tau]^2),
// same lag and zero-frame conventions as above.
std::vector<double> nsdf_curve(const std::vector<double>& frame, const LagRange& lags);

// Parabolic interpolation of a peak at index i of curve y (uses y[i-1..i+1]
// when available); returns the fractional index offset in [-0.5, 0.5].
double parabolic_offset(const std::vector<double>& y, int i);

}  // namespace pitchml
