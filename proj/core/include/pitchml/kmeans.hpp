#pragma once

#include <cstdint>

#include "pitchml/ml_types.hpp"

namespace pitchml {

struct KMeansModel {
  Mat centroids;
  double inertia = 0.0;            // within-cluster sum of squares
  bool degenerate = false;         // duplicate centroids (identical points)
  std::vector<double> inertia_trace;  // per Lloyd iteration, best restart

  int assign(const Vec& x) const;  // nearest centroid, ties to lower index
};

// k-means++ seeding, Lloyd iterations to centroid movement < 1e-6 or 300
// iterations, best of `restarts` seeded runs by inertia.
KMeansModel fit_kmeans(const Mat& data, int k, uint64_t seed, int restarts = 10);

}  // namespace pitchml
