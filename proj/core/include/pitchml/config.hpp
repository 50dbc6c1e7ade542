#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pitchml/features.hpp"
#include "pitchml/ground_truth.hpp"
#include "pitchml/mlp.hpp"

namespace pitchml {

// Every tunable in one place; defaults match the documented per-module
// values. Loadable from JSON, unknown keys rejected.
struct Config {
  F0SearchRange range;
  int voicing_radius = 1;
  int fuser_radius = 2;
  std::vector<int> candidate_subset = {kF0Ac, kF0Ssh, kF0AcMs};
  int nmi_bins = 32;
  GroundTruthConfig gt;
  uint64_t seed = 0;
  double voicing_threshold = 0.5;
  int knn_k = 5;
  double logreg_lambda = 1e-2;
  MlpHyper mlp;

  void validate() const;
};

Config config_from_json(const std::string& text);
Config load_config(const std::string& path);

int candidate_index_from_name(const std::string& name);

}  // namespace pitchml
