#pragma once

#include "pitchml/ml_types.hpp"

namespace pitchml {

// Stores the (already standardized) training set. Distance ties are broken
// by lower training index. k must be odd for tie-free binary classification.
struct KnnModel {
  Mat points;
  std::vector<double> targets;  // class labels or regression targets
  int k = 5;
};

KnnModel make_knn(const Mat& points, const std::vector<double>& targets, int k = 5);

// Majority label of the k nearest neighbors (binary labels).
int knn_predict(const KnnModel& model, const Vec& query);

// Mean of the k nearest neighbors' targets.
double knn_regress(const KnnModel& model, const Vec& query);

}  // namespace pitchml
