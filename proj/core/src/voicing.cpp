#include "pitchml/voicing.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

VoicingKind voicing_kind_from_string(const std::string& s) {
  if (s == "kmeans") return VoicingKind::kKMeans;
  if (s == "gmm") return VoicingKind::kGmm;
  if (s == "logreg") return VoicingKind::kLogReg;
  if (s == "knn") return VoicingKind::kKnn;
  if (s == "mlp") return VoicingKind::kMlp;
  throw ValidationError("unknown voicing kind: " + s);
}

std::string to_string(VoicingKind kind) {
  switch (kind) {
    case VoicingKind::kKMeans: return "kmeans";
    case VoicingKind::kGmm: return "gmm";
    case VoicingKind::kLogReg: return "logreg";
    case VoicingKind::kKnn: return "knn";
    case VoicingKind::kMlp: return "mlp";
  }
  return "?";
}

bool voicing_kind_is_supervised(VoicingKind kind) {
  return kind == VoicingKind::kLogReg || kind == VoicingKind::kKnn ||
         kind == VoicingKind::kMlp;
}

Mat stack_context(const Mat& features, int radius) {
  if (radius < 0) throw ValidationError("context radius must be >= 0");
  if (radius == 0) return features;
  const int n = static_cast<int>(features.size());
  Mat out;
  out.reserve(features.size());
  for (int k = 0; k < n; ++k) {
    Vec row;
    row.reserve(features[0].size() * (2 * radius + 1));
    for (int j = k - radius; j <= k + radius; ++j) {
      const int jj = std::clamp(j, 0, n - 1);  // edge replication
      row.insert(row.end(), features[jj].begin(), features[jj].end());
    }
    out.push_back(std::move(row));
  }
  return out;
}

Mat feature_rows(const FeatureMatrix& m) {
  Mat rows;
  rows.reserve(m.features.size());
  for (const auto& f : m.features) rows.emplace_back(f.begin(), f.end());
  return rows;
}

namespace {

Mat prepare_inputs(const VoicingModel& model, const Mat& features) {
  if (!features.empty() &&
      static_cast<int>(features[0].size()) != kNumVoicingFeatures)
    throw ValidationError("voicing expects 16-dimensional feature rows");
  return stack_context(model.standardizer.apply(features), model.context_radius);
}

bool predict_one(const VoicingModel& model, const Vec& x) {
  switch (model.kind) {
    case VoicingKind::kKMeans:
      return model.kmeans.assign(x) == model.voiced_cluster;
    case VoicingKind::kGmm:
      return model.gmm.assign(x) == model.voiced_cluster;
    case VoicingKind::kLogReg:
      return model.logreg.probability(x) > model.threshold;
    case VoicingKind::kKnn:
      return knn_predict(model.knn, x) == 1;
    case VoicingKind::kMlp:
      return model.mlp.forward(x)[0] > model.threshold;
  }
  return false;
}

}  // namespace

VoicingModel fit_voicing_unsupervised(const Mat& features, VoicingKind kind,
                                      int radius, uint64_t seed) {
  if (kind != VoicingKind::kKMeans && kind != VoicingKind::kGmm)
    throw ValidationError("unsupervised voicing requires kmeans or gmm");
  if (features.size() < 4)
    throw ValidationError("unsupervised voicing needs at least 4 frames");

  VoicingModel model;
  model.kind = kind;
  model.context_radius = radius;
  model.standardizer = standardize_fit(features);
  Mat stacked = stack_context(model.standardizer.apply(features), radius);

  std::vector<int> assign(features.size());
  if (kind == VoicingKind::kKMeans) {
    model.kmeans = fit_kmeans(stacked, 2, seed);
    for (std::size_t i = 0; i < stacked.size(); ++i)
      assign[i] = model.kmeans.assign(stacked[i]);
  } else {
    model.gmm = fit_gmm(stacked, 2, seed);
    for (std::size_t i = 0; i < stacked.size(); ++i)
      assign[i] = model.gmm.assign(stacked[i]);
  }

  // the cluster with the higher mean raw SSH (center frame) is voiced
  double ssh_sum[2] = {0.0, 0.0};
  std::size_t counts[2] = {0, 0};
  for (std::size_t i = 0; i < features.size(); ++i) {
    ssh_sum[assign[i]] += features[i][kSsh];
    ++counts[assign[i]];
  }
  const double m0 = counts[0] ? ssh_sum[0] / counts[0] : 0.0;
  const double m1 = counts[1] ? ssh_sum[1] / counts[1] : 0.0;
  model.voiced_cluster = m1 > m0 ? 1 : 0;

  // warn when the clusters barely differ in SSH (e.g. all-noise input):
  // compare the gap between the cluster SSH means against the pooled
  // within-cluster SSH spread
  double ssh_sq[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < features.size(); ++i)
    ssh_sq[assign[i]] += features[i][kSsh] * features[i][kSsh];
  double within_var = 0.0;
  for (int c = 0; c < 2; ++c) {
    if (!counts[c]) continue;
    const double mean = ssh_sum[c] / static_cast<double>(counts[c]);
    within_var += ssh_sq[c] - static_cast<double>(counts[c]) * mean * mean;
  }
  within_var /= static_cast<double>(features.size());
  const double within_std = std::sqrt(std::max(within_var, 0.0));
  model.low_separation = std::abs(m1 - m0) < 3.0 * std::max(within_std, 1e-12);
  return model;
}

VoicingModel fit_voicing_supervised(const Mat& features, const std::vector<int>& labels,
                                    VoicingKind kind, int radius, uint64_t seed,
                                    const MlpHyper& mlp_hyper, int knn_k,
                                    double logreg_lambda) {
  if (!voicing_kind_is_supervised(kind))
    throw ValidationError("supervised voicing requires logreg, knn, or mlp");
  if (features.size() != labels.size())
    throw ValidationError("voicing labels must align with frames");
  bool has0 = false, has1 = false;
  for (int y : labels) (y ? has1 : has0) = true;
  if (!has0 || !has1)
    throw ValidationError("supervised voicing needs both classes in the labels");

  VoicingModel model;
  model.kind = kind;
  model.context_radius = radius;
  model.standardizer = standardize_fit(features);
  Mat stacked = stack_context(model.standardizer.apply(features), radius);

  switch (kind) {
    case VoicingKind::kLogReg:
      model.logreg = fit_logreg(stacked, labels, logreg_lambda);
      break;
    case VoicingKind::kKnn: {
      std::vector<double> targets(labels.begin(), labels.end());
      model.knn = make_knn(stacked, targets, knn_k);
      break;
    }
    case VoicingKind::kMlp: {
      Mat targets(labels.size(), Vec(1));
      for (std::size_t i = 0; i < labels.size(); ++i) targets[i][0] = labels[i];
      MlpHyper hyper = mlp_hyper;
      hyper.seed = seed;
      model.mlp = fit_mlp(stacked, targets, MlpHead::kSigmoid, hyper);
      break;
    }
    default:
      break;
  }
  return model;
}

VoicingDecisions predict_voicing(const VoicingModel& model, const Mat& features) {
  Mat inputs = prepare_inputs(model, features);
  VoicingDecisions out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = predict_one(model, inputs[i]);
  return out;
}

}  // namespace pitchml
