#pragma once

#include "pitchml/ml_types.hpp"

namespace pitchml {

// Per-dimension z-scoring with the std floored at 1e-8, so constant
// dimensions map to zero instead of blowing up.
struct Standardizer {
  Vec mean;
  Vec std_dev;

  int dim() const { return static_cast<int>(mean.size()); }

  Vec apply(const Vec& x) const;
  Mat apply(const Mat& data) const;
  Vec inverse(const Vec& z) const;
};

Standardizer standardize_fit(const Mat& data);

}  // namespace pitchml
