#pragma once

#include <cstdint>

#include "pitchml/ml_types.hpp"

namespace pitchml {

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Vec weights;    // simplex
  Mat means;      // k x dim
  Mat variances;  // k x dim, floored at 1e-6
  std::vector<double> log_likelihood_trace;  // mean log-likelihood per EM iteration

  int components() const { return static_cast<int>(weights.size()); }
  // Posterior responsibilities for one point.
  Vec responsibilities(const Vec& x) const;
  int assign(const Vec& x) const;
  double mean_log_likelihood(const Mat& data) const;
};

// EM initialized from k-means assignments; stops when the mean
// log-likelihood gain drops below 1e-6 or after 200 iterations.
// Throws ValidationError on variance collapse (all points identical).
GmmModel fit_gmm(const Mat& data, int k, uint64_t seed);

}  // namespace pitchml
