#pragma once

#include "pitchml/ml_types.hpp"

namespace pitchml {

struct LogRegModel {
  Vec weights;
  double bias = 0.0;
  double l2_lambda = 1e-2;
  double final_grad_norm = 0.0;

  double probability(const Vec& x) const;  // sigmoid(w.x + b)
  bool predict(const Vec& x, double threshold = 0.5) const;
};

// Minimizes mean cross-entropy + lambda * |w|^2 / 2 (bias unpenalized) by
// full-batch gradient descent with backtracking line search, to gradient
// norm < 1e-6 or 5000 iterations. Throws ValidationError on single-class labels.
LogRegModel fit_logreg(const Mat& data, const std::vector<int>& labels,
                       double l2_lambda = 1e-2);

}  // namespace pitchml
