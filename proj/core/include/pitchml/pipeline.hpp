#pragma once

#include "pitchml/config.hpp"
#include "pitchml/f0_fusion.hpp"
#include "pitchml/manifest.hpp"
#include "pitchml/model_json.hpp"
#include "pitchml/voicing.hpp"

namespace pitchml {

// Per-entry extraction results the trainer works from.
struct CorpusFeatures {
  std::vector<FeatureMatrix> per_entry;
  // aligned per-entry references (empty tracks for entries without EGG)
  std::vector<ReferenceTrack> references;
  std::vector<bool> has_reference;
};

CorpusFeatures extract_corpus(const CorpusManifest& manifest, const Config& config);

// Trains the voicing model and F0 fuser over a manifest. Supervised voicing
// or a trained fuser require EGG on every entry; the error names offenders.
// Speakers are balanced by capping each one's frames to the smallest
// speaker's count.
ModelDocument train_pipeline(const CorpusManifest& manifest, const Config& config,
                             VoicingKind voicing_kind, FuserKind fuser_kind);

// extract -> predict voicing -> fuse F0.
PitchTrack track_waveform(const Waveform& w, const ModelDocument& model);

}  // namespace pitchml
