#include "pitchml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pitchml/errors.hpp"
#include "pitchml/ground_truth.hpp"

namespace pitchml {

CorpusFeatures extract_corpus(const CorpusManifest& manifest, const Config& config) {
  CorpusFeatures out;
  for (const ManifestEntry& entry : manifest) {
    Waveform speech = load_waveform(entry.speech_path);
    FeatureMatrix features = extract_all(speech, config.range);

    ReferenceTrack ref;
    bool has_ref = false;
    if (entry.has_egg()) {
      Waveform egg = load_waveform(entry.egg_path);
      if (egg.sample_rate != speech.sample_rate)
        throw ValidationError("speech/EGG sample rate mismatch for " + entry.speech_path);
      const int64_t diff = std::llabs(static_cast<int64_t>(egg.samples.size()) -
                                      static_cast<int64_t>(speech.samples.size()));
      if (diff > features.grid.hop)
        throw ValidationError("speech/EGG duration differs by more than one hop for " +
                              entry.speech_path);
      GciSequence gcis = degg_peaks(egg, config.range, config.gt);
      ref = gci_to_reference(gcis, features.grid, config.range, config.gt);
      // truncate to the shorter grid
      const int n = std::min(features.grid.n_frames,
                             static_cast<int>(ref.track.frames.size()));
      features.grid.n_frames = n;
      features.features.resize(n);
      features.candidates.resize(n);
      ref.track.frames.resize(n);
      ref.periods_used.resize(n);
      has_ref = true;
    }
    out.per_entry.push_back(std::move(features));
    out.references.push_back(std::move(ref));
    out.has_reference.push_back(has_ref);
  }
  return out;
}

namespace {

struct TrainingRows {
  Mat features;                    // 16-dim rows
  std::vector<int> labels;         // reference voicing (supervised only)
  CandidateRows candidates;
  VoicingDecisions ref_voiced;
  std::vector<double> ref_f0;
};

// Concatenates per-entry frames, capping every speaker to the smallest
// speaker's frame count so training is speaker-balanced.
TrainingRows gather_balanced(const CorpusManifest& manifest, const CorpusFeatures& corpus,
                             bool with_labels) {
  std::map<std::string, std::size_t> speaker_frames;
  for (std::size_t e = 0; e < manifest.size(); ++e) {
    speaker_frames[manifest[e].speaker] += corpus.per_entry[e].features.size();
  }
  std::size_t cap = std::numeric_limits<std::size_t>::max();
  for (const auto& [_, n] : speaker_frames) cap = std::min(cap, n);

  std::map<std::string, std::size_t> taken;
  TrainingRows rows;
  for (std::size_t e = 0; e < manifest.size(); ++e) {
    const FeatureMatrix& fm = corpus.per_entry[e];
    std::size_t& used = taken[manifest[e].speaker];
    for (std::size_t k = 0; k < fm.features.size() && used < cap; ++k, ++used) {
      rows.features.emplace_back(fm.features[k].begin(), fm.features[k].end());
      rows.candidates.push_back(fm.candidates[k]);
      if (with_labels) {
        const PitchFrame& rf = corpus.references[e].track.frames[k];
        rows.labels.push_back(rf.voiced ? 1 : 0);
        rows.ref_voiced.push_back(rf.voiced);
        rows.ref_f0.push_back(rf.f0.value_or(0.0));
      }
    }
  }
  return rows;
}

}  // namespace

ModelDocument train_pipeline(const CorpusManifest& manifest, const Config& config,
                             VoicingKind voicing_kind, FuserKind fuser_kind) {
  if (manifest.empty()) throw ValidationError("training manifest is empty");
  config.validate();

  const bool needs_egg =
      voicing_kind_is_supervised(voicing_kind) || fuser_kind != FuserKind::kMedian;
  if (needs_egg) {
    std::string missing;
    for (const ManifestEntry& e : manifest) {
      if (!e.has_egg()) missing += (missing.empty() ? "" : ", ") + e.speech_path;
    }
    if (!missing.empty())
      throw ValidationError("supervised training requires EGG for every entry; missing: " +
                            missing);
  }

  CorpusFeatures corpus = extract_corpus(manifest, config);
  TrainingRows rows = gather_balanced(manifest, corpus, needs_egg);

  ModelDocument doc;
  doc.range = config.range;

  if (voicing_kind_is_supervised(voicing_kind)) {
    doc.voicing = fit_voicing_supervised(rows.features, rows.labels, voicing_kind,
                                         config.voicing_radius, config.seed, config.mlp,
                                         config.knn_k, config.logreg_lambda);
  } else {
    doc.voicing = fit_voicing_unsupervised(rows.features, voicing_kind,
                                           config.voicing_radius, config.seed);
  }
  doc.voicing.threshold = config.voicing_threshold;

  if (fuser_kind == FuserKind::kMedian) {
    doc.fuser.kind = FuserKind::kMedian;
    doc.fuser.candidate_indices = config.candidate_subset;
    doc.fuser.context_radius = config.fuser_radius;
  } else {
    doc.fuser = fit_fuser(rows.candidates, rows.ref_voiced, rows.ref_f0, fuser_kind,
                          config.candidate_subset, config.fuser_radius, config.seed,
                          config.mlp, config.knn_k);
  }
  return doc;
}

PitchTrack track_waveform(const Waveform& w, const ModelDocument& model) {
  FeatureMatrix features = extract_all(w, model.range);
  VoicingDecisions voicing = predict_voicing(model.voicing, feature_rows(features));
  return predict_track(voicing, features.candidates, model.fuser, model.range);
}

}  // namespace pitchml
