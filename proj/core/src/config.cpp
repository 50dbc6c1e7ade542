#include "pitchml/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "pitchml/errors.hpp"

namespace pitchml {

namespace {
using nlohmann::json;
}

int candidate_index_from_name(const std::string& name) {
  for (int i = 0; i < kNumF0Candidates; ++i) {
    if (name == kCandidateNames[i]) return i;
  }
  throw ValidationError("unknown F0 candidate name: " + name);
}

void Config::validate() const {
  if (!(range.f0_min > 0.0 && range.f0_min < range.f0_max))
    throw ValidationError("config: 0 < f0_min < f0_max required");
  if (voicing_radius < 0 || fuser_radius < 0)
    throw ValidationError("config: context radii must be >= 0");
  if (candidate_subset.empty())
    throw ValidationError("config: candidate subset must be nonempty");
  for (int c : candidate_subset) {
    if (c < 0 || c >= kNumF0Candidates)
      throw ValidationError("config: candidate index out of range");
  }
  if (nmi_bins < 2) throw ValidationError("config: nmi_bins must be >= 2");
  if (knn_k <= 0) throw ValidationError("config: knn_k must be positive");
  if (voicing_threshold <= 0.0 || voicing_threshold >= 1.0)
    throw ValidationError("config: voicing_threshold must be in (0, 1)");
}

Config config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  static const std::set<std::string> known = {
      "f0_min", "f0_max", "voicing_radius", "fuser_radius", "candidates",
      "nmi_bins", "seed", "voicing_threshold", "knn_k", "logreg_lambda",
      "gt_peak_rel_threshold", "gt_percentile_window_ms", "gt_continuity_pct",
      "mlp_lr", "mlp_batch", "mlp_epochs", "mlp_hidden"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ValidationError("config: unknown key '" + key + "'");
  }

  Config c;
  c.range.f0_min = j.value("f0_min", c.range.f0_min);
  c.range.f0_max = j.value("f0_max", c.range.f0_max);
  c.voicing_radius = j.value("voicing_radius", c.voicing_radius);
  c.fuser_radius = j.value("fuser_radius", c.fuser_radius);
  if (j.contains("candidates")) {
    c.candidate_subset.clear();
    for (const auto& name : j.at("candidates"))
      c.candidate_subset.push_back(candidate_index_from_name(name.get<std::string>()));
  }
  c.nmi_bins = j.value("nmi_bins", c.nmi_bins);
  c.seed = j.value("seed", c.seed);
  c.voicing_threshold = j.value("voicing_threshold", c.voicing_threshold);
  c.knn_k = j.value("knn_k", c.knn_k);
  c.logreg_lambda = j.value("logreg_lambda", c.logreg_lambda);
  c.gt.peak_rel_threshold = j.value("gt_peak_rel_threshold", c.gt.peak_rel_threshold);
  c.gt.percentile_window_ms = j.value("gt_percentile_window_ms", c.gt.percentile_window_ms);
  c.gt.continuity_pct = j.value("gt_continuity_pct", c.gt.continuity_pct);
  c.mlp.lr = j.value("mlp_lr", c.mlp.lr);
  c.mlp.batch = j.value("mlp_batch", c.mlp.batch);
  c.mlp.epochs = j.value("mlp_epochs", c.mlp.epochs);
  if (j.contains("mlp_hidden")) c.mlp.hidden = j.at("mlp_hidden").get<std::vector<int>>();
  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

}  // namespace pitchml
