#pragma once

#include <complex>
#include <vector>

namespace pitchml {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft(std::vector<std::complex<double>>& x);
void ifft(std::vector<std::complex<double>>& x);

int next_pow2(int n);

// Default FFT size for a frame: smallest power of two >= 2 * frame_length.
int default_fft_size(int frame_length);

// Linear magnitude over bins [0, fft_size/2]; bin k -> k * sample_rate / fft_size Hz.
std::vector<double> amplitude_spectrum(const std::vector<double>& frame, int fft_size);

// 20*log10(|FFT| + 1e-12). Throws ValidationError if fft_size < frame length
// or fft_size is not a power of two.
std::vector<double> magnitude_spectrum_db(const std::vector<double>& frame, int fft_size);

// Real cepstrum: IFFT of ln(|FFT| + 1e-12), real part, length fft_size.
std::vector<double> real_cepstrum(const std::vector<double>& frame, int fft_size);

// Same cepstrum computed from a half-spectrum (fft_size/2 + 1 bins), saving
// the forward transform when the amplitude spectrum is already available.
std::vector<double> real_cepstrum_from_amplitude(const std::vector<double>& amplitude,
                                                 int fft_size);

}  // namespace pitchml
