#pragma once

#include <cstdint>
#include <string>

#include "pitchml/features.hpp"
#include "pitchml/knn.hpp"
#include "pitchml/ml_types.hpp"
#include "pitchml/mlp.hpp"
#include "pitchml/pitch_track.hpp"
#include "pitchml/standardizer.hpp"
#include "pitchml/voicing.hpp"

namespace pitchml {

enum class FuserKind { kMedian, kLinReg, kKnnReg, kMlpIdx };

FuserKind fuser_kind_from_string(const std::string& s);
std::string to_string(FuserKind kind);

struct LinRegFuser {
  Vec weights;
  double bias = 0.0;
};

// Fuses per-frame F0 candidates inside voiced segments. The default
// candidate subset is {f0_ac, f0_ssh, f0_ac_ms} with a context of +-2 frames.
struct F0Fuser {
  FuserKind kind = FuserKind::kMedian;
  std::vector<int> candidate_indices = {kF0Ac, kF0Ssh, kF0AcMs};
  int context_radius = 2;

  // trained kinds only
  Standardizer standardizer;
  LinRegFuser linreg;
  KnnModel knn;
  MlpModel mlp;

  int input_dim() const {
    return static_cast<int>(candidate_indices.size()) * (2 * context_radius + 1);
  }
};

using CandidateRows = std::vector<std::array<double, kNumF0Candidates>>;

// Median of the stacked (candidates x context) values; context frames
// outside the frame's voiced segment are excluded from the stack. voicing
// bounds the segments; frames where voicing is false return no value.
double fuse_median_frame(const CandidateRows& candidates, const VoicingDecisions& voicing,
                         int frame, const std::vector<int>& subset, int radius);

// Trains a fuser on frames where ground-truth F0 is present (voiced per the
// reference). Throws ValidationError when no voiced frames exist.
F0Fuser fit_fuser(const CandidateRows& candidates, const VoicingDecisions& ref_voiced,
                  const std::vector<double>& ref_f0, FuserKind kind,
                  const std::vector<int>& subset, int radius, uint64_t seed,
                  const MlpHyper& mlp_hyper = {}, int knn_k = 5);

// F0 on exactly the voiced frames, clipped to the search range.
PitchTrack predict_track(const VoicingDecisions& voicing, const CandidateRows& candidates,
                         const F0Fuser& fuser, const F0SearchRange& range);

}  // namespace pitchml
