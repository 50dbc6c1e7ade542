#pragma once

#include <string>
#include <vector>

namespace pitchml {

// Mono audio, samples normalized to [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Reads a RIFF WAV file. Accepts PCM 16-bit and IEEE float32, mono only.
// Throws ValidationError for multi-channel files, unsupported encodings,
// or unreadable files (each with a distinct message).
Waveform load_waveform(const std::string& path);

// Writes 16-bit PCM. Samples are clipped to [-1, 1] before quantization.
void save_waveform(const std::string& path, const Waveform& w);

}  // namespace pitchml
