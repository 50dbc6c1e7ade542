#include "pitchml/standardizer.hpp"

#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {
constexpr double kStdFloor = 1e-8;
}

Standardizer standardize_fit(const Mat& data) {
  if (data.empty()) throw ValidationError("standardize_fit needs at least one sample");
  const std::size_t d = data[0].size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.std_dev.assign(d, 0.0);
  for (const Vec& row : data) {
    if (row.size() != d) throw ValidationError("ragged data in standardize_fit");
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(data.size());
  for (const Vec& row : data) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - s.mean[j];
      s.std_dev[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    s.std_dev[j] = std::max(std::sqrt(s.std_dev[j] / static_cast<double>(data.size())),
                            kStdFloor);
  }
  return s;
}

Vec Standardizer::apply(const Vec& x) const {
  if (x.size() != mean.size())
    throw ValidationError("standardizer dimension mismatch");
  Vec z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean[j]) / std_dev[j];
  return z;
}

Mat Standardizer::apply(const Mat& data) const {
  Mat out;
  out.reserve(data.size());
  for (const Vec& row : data) out.push_back(apply(row));
  return out;
}

Vec Standardizer::inverse(const Vec& z) const {
  if (z.size() != mean.size())
    throw ValidationError("standardizer dimension mismatch");
  Vec x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * std_dev[j] + mean[j];
  return x;
}

}  // namespace pitchml
