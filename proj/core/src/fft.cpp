#include "pitchml/fft.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {
constexpr double kLogFloor = 1e-12;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_core(std::vector<std::complex<double>>& x, bool inverse) {
  const std::size_t n = x.size();
  if (!is_pow2(n)) throw ValidationError("FFT size must be a power of two");

  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = x[i + k];
        std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : x) v /= static_cast<double>(n);
  }
}

std::vector<std::complex<double>> padded_fft(const std::vector<double>& frame, int fft_size) {
  if (fft_size < static_cast<int>(frame.size()))
    throw ValidationError("fft_size smaller than frame length");
  std::vector<std::complex<double>> x(static_cast<std::size_t>(fft_size));
  for (std::size_t i = 0; i < frame.size(); ++i) x[i] = frame[i];
  fft_core(x, false);
  return x;
}
}  // namespace

void fft(std::vector<std::complex<double>>& x) { fft_core(x, false); }
void ifft(std::vector<std::complex<double>>& x) { fft_core(x, true); }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

int default_fft_size(int frame_length) { return next_pow2(2 * frame_length); }

std::vector<double> amplitude_spectrum(const std::vector<double>& frame, int fft_size) {
  auto x = padded_fft(frame, fft_size);
  std::vector<double> mag(static_cast<std::size_t>(fft_size) / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(x[k]);
  return mag;
}

std::vector<double> magnitude_spectrum_db(const std::vector<double>& frame, int fft_size) {
  auto mag = amplitude_spectrum(frame, fft_size);
  // floor relative to the spectral peak so the dB spectrum of c*x is the dB
  // spectrum of x shifted by a constant (exact amplitude-scale equivariance)
  const double peak = *std::max_element(mag.begin(), mag.end());
  const double floor = peak > 0.0 ? peak * kLogFloor : kLogFloor;
  for (auto& m : mag) m = 20.0 * std::log10(m + floor);
  return mag;
}

std::vector<double> real_cepstrum(const std::vector<double>& frame, int fft_size) {
  auto x = padded_fft(frame, fft_size);
  double peak = 0.0;
  for (const auto& v : x) peak = std::max(peak, std::abs(v));
  const double floor = peak > 0.0 ? peak * kLogFloor : kLogFloor;
  for (auto& v : x) v = std::log(std::abs(v) + floor);
  fft_core(x, true);
  std::vector<double> ceps(static_cast<std::size_t>(fft_size));
  for (std::size_t i = 0; i < ceps.size(); ++i) ceps[i] = x[i].real();
  return ceps;
}

std::vector<double> real_cepstrum_from_amplitude(const std::vector<double>& amplitude,
                                                 int fft_size) {
  if (static_cast<int>(amplitude.size()) != fft_size / 2 + 1)
    throw ValidationError("amplitude spectrum size does not match fft_size");
  std::vector<std::complex<double>> x(static_cast<std::size_t>(fft_size));
  const double peak = *std::max_element(amplitude.begin(), amplitude.end());
  const double floor = peak > 0.0 ? peak * kLogFloor : kLogFloor;
  for (int k = 0; k <= fft_size / 2; ++k) x[k] = std::log(amplitude[k] + floor);
  for (int k = fft_size / 2 + 1; k < fft_size; ++k) x[k] = x[fft_size - k];
  fft_core(x, true);
  std::vector<double> ceps(static_cast<std::size_t>(fft_size));
  for (std::size_t i = 0; i < ceps.size(); ++i) ceps[i] = x[i].real();
  return ceps;
}

}  // namespace pitchml
