#include "pitchml/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "pitchml/errors.hpp"
#include "pitchml/fft.hpp"

namespace pitchml {

namespace {
void check_lags(const std::vector<double>& frame, const LagRange& lags) {
  const int len = static_cast<int>(frame.size());
  if (lags.lag_min < 0 || lags.lag_min > lags.lag_max)
    throw ValidationError("invalid lag range");
  if (lags.lag_max >= len)
    throw ValidationError("lag_max must be smaller than the frame length");
}

// Linear autocorrelation cross(tau) = sum_{n=0}^{L-tau-1} x[n] x[n+tau]
// for tau in [0, lag_max], via one FFT round trip.
std::vector<double> cross_terms(const std::vector<double>& frame, int lag_max) {
  const int len = static_cast<int>(frame.size());
  const int n = next_pow2(2 * len);
  std::vector<std::complex<double>> x(static_cast<std::size_t>(n));
  for (int i = 0; i < len; ++i) x[i] = frame[i];
  fft(x);
  for (auto& v : x) v = std::norm(v);
  ifft(x);
  std::vector<double> cross(static_cast<std::size_t>(lag_max) + 1);
  for (int tau = 0; tau <= lag_max; ++tau) cross[tau] = x[tau].real();
  return cross;
}
}  // namespace

CorrelationCurves correlation_curves(const std::vector<double>& frame,
                                     const LagRange& lags) {
  check_lags(frame, lags);
  const int len = static_cast<int>(frame.size());
  const std::size_t count = static_cast<std::size_t>(lags.lag_max - lags.lag_min + 1);

  std::vector<double> cross = cross_terms(frame, lags.lag_max);

  // prefix[i] = sum of x[0..i-1]^2, so head/tail energies are exact.
  std::vector<double> prefix(static_cast<std::size_t>(len) + 1, 0.0);
  for (int i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + frame[i] * frame[i];
  const double total = prefix[len];

  CorrelationCurves out;
  out.lag_min = lags.lag_min;
  out.ac.assign(count, 0.0);
  out.nsdf.assign(count, 0.0);
  for (int tau = lags.lag_min; tau <= lags.lag_max; ++tau) {
    const double e0 = prefix[len - tau];         // sum x[0..L-tau-1]^2
    const double e1 = total - prefix[tau];       // sum x[tau..L-1]^2
    const std::size_t i = static_cast<std::size_t>(tau - lags.lag_min);
    const double denom = std::sqrt(e0 * e1);
    if (denom > 0.0) out.ac[i] = std::clamp(cross[tau] / denom, -1.0, 1.0);
    if (e0 + e1 > 0.0) out.nsdf[i] = std::clamp(2.0 * cross[tau] / (e0 + e1), -1.0, 1.0);
  }
  return out;
}

std::vector<double> normalized_autocorrelation(const std::vector<double>& frame,
                                               const LagRange& lags) {
  return correlation_curves(frame, lags).ac;
}

std::vector<double> nsdf_curve(const std::vector<double>& frame, const LagRange& lags) {
  return correlation_curves(frame, lags).nsdf;
}

double parabolic_offset(const std::vector<double>& y, int i) {
  if (i <= 0 || i + 1 >= static_cast<int>(y.size())) return 0.0;
  const double a = y[i - 1], b = y[i], c = y[i + 1];
  const double denom = a - 2.0 * b + c;
  if (std::abs(denom) < 1e-30) return 0.0;
  double off = 0.5 * (a - c) / denom;
  return std::clamp(off, -0.5, 0.5);
}

}  // namespace pitchml
