#include "pitchml/model_json.hpp"

#include <fstream>

#include "json.hpp"
#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

using nlohmann::json;

json standardizer_to_json(const Standardizer& s) {
  return {{"mean", s.mean}, {"std", s.std_dev}};
}

Standardizer standardizer_from_json(const json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<Vec>();
  s.std_dev = j.at("std").get<Vec>();
  return s;
}

json mlp_to_json(const MlpModel& m) {
  json j;
  j["layer_sizes"] = m.layer_sizes;
  j["weights"] = m.weights;
  j["biases"] = m.biases;
  switch (m.head) {
    case MlpHead::kSigmoid: j["head"] = "sigmoid"; break;
    case MlpHead::kSoftmax: j["head"] = "softmax"; break;
    case MlpHead::kLinear: j["head"] = "linear"; break;
  }
  return j;
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  m.weights = j.at("weights").get<std::vector<Mat>>();
  m.biases = j.at("biases").get<std::vector<Vec>>();
  const std::string head = j.at("head").get<std::string>();
  if (head == "sigmoid") m.head = MlpHead::kSigmoid;
  else if (head == "softmax") m.head = MlpHead::kSoftmax;
  else if (head == "linear") m.head = MlpHead::kLinear;
  else throw ValidationError("unknown MLP head in model document: " + head);
  return m;
}

json knn_to_json(const KnnModel& m) {
  return {{"points", m.points}, {"targets", m.targets}, {"k", m.k}};
}

KnnModel knn_from_json(const json& j) {
  KnnModel m;
  m.points = j.at("points").get<Mat>();
  m.targets = j.at("targets").get<std::vector<double>>();
  m.k = j.at("k").get<int>();
  return m;
}

json voicing_to_json(const VoicingModel& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["context_radius"] = m.context_radius;
  j["threshold"] = m.threshold;
  j["standardizer"] = standardizer_to_json(m.standardizer);
  switch (m.kind) {
    case VoicingKind::kKMeans:
      j["centroids"] = m.kmeans.centroids;
      j["voiced_cluster"] = m.voiced_cluster;
      j["low_separation"] = m.low_separation;
      break;
    case VoicingKind::kGmm:
      j["weights"] = m.gmm.weights;
      j["means"] = m.gmm.means;
      j["variances"] = m.gmm.variances;
      j["voiced_cluster"] = m.voiced_cluster;
      j["low_separation"] = m.low_separation;
      break;
    case VoicingKind::kLogReg:
      j["logreg_weights"] = m.logreg.weights;
      j["logreg_bias"] = m.logreg.bias;
      j["l2_lambda"] = m.logreg.l2_lambda;
      break;
    case VoicingKind::kKnn:
      j["knn"] = knn_to_json(m.knn);
      break;
    case VoicingKind::kMlp:
      j["mlp"] = mlp_to_json(m.mlp);
      break;
  }
  return j;
}

VoicingModel voicing_from_json(const json& j) {
  VoicingModel m;
  m.kind = voicing_kind_from_string(j.at("kind").get<std::string>());
  m.context_radius = j.at("context_radius").get<int>();
  m.threshold = j.at("threshold").get<double>();
  m.standardizer = standardizer_from_json(j.at("standardizer"));
  switch (m.kind) {
    case VoicingKind::kKMeans:
      m.kmeans.centroids = j.at("centroids").get<Mat>();
      m.voiced_cluster = j.at("voiced_cluster").get<int>();
      m.low_separation = j.value("low_separation", false);
      break;
    case VoicingKind::kGmm:
      m.gmm.weights = j.at("weights").get<Vec>();
      m.gmm.means = j.at("means").get<Mat>();
      m.gmm.variances = j.at("variances").get<Mat>();
      m.voiced_cluster = j.at("voiced_cluster").get<int>();
      m.low_separation = j.value("low_separation", false);
      break;
    case VoicingKind::kLogReg:
      m.logreg.weights = j.at("logreg_weights").get<Vec>();
      m.logreg.bias = j.at("logreg_bias").get<double>();
      m.logreg.l2_lambda = j.at("l2_lambda").get<double>();
      break;
    case VoicingKind::kKnn:
      m.knn = knn_from_json(j.at("knn"));
      break;
    case VoicingKind::kMlp:
      m.mlp = mlp_from_json(j.at("mlp"));
      break;
  }
  return m;
}

json fuser_to_json(const F0Fuser& f) {
  json j;
  j["kind"] = to_string(f.kind);
  j["candidates"] = f.candidate_indices;
  j["context_radius"] = f.context_radius;
  if (f.kind == FuserKind::kMedian) return j;
  j["standardizer"] = standardizer_to_json(f.standardizer);
  switch (f.kind) {
    case FuserKind::kLinReg:
      j["weights"] = f.linreg.weights;
      j["bias"] = f.linreg.bias;
      break;
    case FuserKind::kKnnReg:
      j["knn"] = knn_to_json(f.knn);
      break;
    case FuserKind::kMlpIdx:
      j["mlp"] = mlp_to_json(f.mlp);
      break;
    default:
      break;
  }
  return j;
}

F0Fuser fuser_from_json(const json& j) {
  F0Fuser f;
  f.kind = fuser_kind_from_string(j.at("kind").get<std::string>());
  f.candidate_indices = j.at("candidates").get<std::vector<int>>();
  f.context_radius = j.at("context_radius").get<int>();
  if (f.kind == FuserKind::kMedian) return f;
  f.standardizer = standardizer_from_json(j.at("standardizer"));
  switch (f.kind) {
    case FuserKind::kLinReg:
      f.linreg.weights = j.at("weights").get<Vec>();
      f.linreg.bias = j.at("bias").get<double>();
      break;
    case FuserKind::kKnnReg:
      f.knn = knn_from_json(j.at("knn"));
      break;
    case FuserKind::kMlpIdx:
      f.mlp = mlp_from_json(j.at("mlp"));
      break;
    default:
      break;
  }
  return f;
}

}  // namespace

std::string model_to_json(const ModelDocument& doc) {
  json j;
  j["version"] = doc.version;
  j["f0_min"] = doc.range.f0_min;
  j["f0_max"] = doc.range.f0_max;
  j["voicing"] = voicing_to_json(doc.voicing);
  j["fuser"] = fuser_to_json(doc.fuser);
  return j.dump(2);
}

ModelDocument model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model document is not valid JSON: ") + e.what());
  }
  if (!j.contains("version"))
    throw ValidationError("model document missing mandatory version field");
  ModelDocument doc;
  doc.version = j.at("version").get<int>();
  if (doc.version != 1)
    throw ValidationError("unsupported model document version " +
                          std::to_string(doc.version));
  try {
    doc.range.f0_min = j.at("f0_min").get<double>();
    doc.range.f0_max = j.at("f0_max").get<double>();
    doc.voicing = voicing_from_json(j.at("voicing"));
    doc.fuser = fuser_from_json(j.at("fuser"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
  return doc;
}

void save_model(const std::string& path, const ModelDocument& doc) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write model file: " + path);
  out << model_to_json(doc);
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace pitchml
