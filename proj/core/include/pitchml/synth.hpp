#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pitchml/features.hpp"
#include "pitchml/manifest.hpp"

namespace pitchml {

// Desk-scale corpus: impulse trains through randomized formant-like filters
// alternating with noise segments, plus a clean pseudo-EGG aligned to the
// excitation and a reference contour derived from the exact pulse positions.
struct SynthSpec {
  int speakers = 2;
  int utterances_per_speaker = 4;
  double utterance_seconds = 10.0;
  int sample_rate = 16000;
  double snr_db = 20.0;  // infinity disables additive noise in voiced parts
  std::vector<double> base_f0 = {120.0, 220.0};  // cycled across speakers
};

SynthSpec synth_spec_from_json(const std::string& text);

struct SynthResult {
  std::string manifest_path;
  CorpusManifest manifest;
  std::vector<std::string> reference_paths;  // aligned with manifest entries
};

// Writes <speaker>_<utt>.wav, _egg.wav, _ref.csv and manifest.tsv under
// out_dir. Fixed seed gives a bit-identical corpus.
SynthResult synth_corpus(const SynthSpec& spec, uint64_t seed,
                         const std::string& out_dir, const F0SearchRange& range);

}  // namespace pitchml
