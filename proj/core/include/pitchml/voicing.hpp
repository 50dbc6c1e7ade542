#pragma once

#include <cstdint>
#include <string>

#include "pitchml/features.hpp"
#include "pitchml/gmm.hpp"
#include "pitchml/kmeans.hpp"
#include "pitchml/knn.hpp"
#include "pitchml/logreg.hpp"
#include "pitchml/ml_types.hpp"
#include "pitchml/mlp.hpp"
#include "pitchml/standardizer.hpp"

namespace pitchml {

enum class VoicingKind { kKMeans, kGmm, kLogReg, kKnn, kMlp };

VoicingKind voicing_kind_from_string(const std::string& s);
std::string to_string(VoicingKind kind);
bool voicing_kind_is_supervised(VoicingKind kind);

// Frame-wise voiced/unvoiced classifier over context-stacked features.
struct VoicingModel {
  VoicingKind kind = VoicingKind::kKMeans;
  int context_radius = 1;
  Standardizer standardizer;  // fit on the 16-dim frame features
  double threshold = 0.5;     // decision threshold for probabilistic kinds

  // clustering kinds
  KMeansModel kmeans;
  GmmModel gmm;
  int voiced_cluster = -1;
  bool low_separation = false;

  // supervised kinds
  LogRegModel logreg;
  KnnModel knn;
  MlpModel mlp;

  int input_dim() const { return kNumVoicingFeatures * (2 * context_radius + 1); }
};

using VoicingDecisions = std::vector<bool>;  // voiced = true, one per frame

// Frame k's vector becomes the concatenation of frames k-radius..k+radius,
// with edge replication at the boundaries.
Mat stack_context(const Mat& features, int radius);

Mat feature_rows(const FeatureMatrix& m);

// Clusters stacked standardized features into 2 groups; the voiced cluster
// is the one with the higher mean raw SSH at the center frame.
VoicingModel fit_voicing_unsupervised(const Mat& features, VoicingKind kind,
                                      int radius, uint64_t seed);

VoicingModel fit_voicing_supervised(const Mat& features, const std::vector<int>& labels,
                                    VoicingKind kind, int radius, uint64_t seed,
                                    const MlpHyper& mlp_hyper = {}, int knn_k = 5,
                                    double logreg_lambda = 1e-2);

VoicingDecisions predict_voicing(const VoicingModel& model, const Mat& features);

}  // namespace pitchml
