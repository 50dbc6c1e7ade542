#include "pitchml/knn.hpp"

#include <algorithm>
#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {
std::vector<std::size_t> nearest(const KnnModel& model, const Vec& query) {
  if (model.points.empty()) throw ValidationError("knn: empty model");
  if (query.size() != model.points[0].size())
    throw ValidationError("knn: query dimension mismatch");
  const std::size_t n = model.points.size();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double d = query[j] - model.points[i][j];
      s += d * d;
    }
    dist[i] = {s, i};  // index as tiebreak: lower index wins equal distances
  }
  const std::size_t k = std::min<std::size_t>(model.k, n);
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = dist[i].second;
  return idx;
}
}  // namespace

KnnModel make_knn(const Mat& points, const std::vector<double>& targets, int k) {
  if (points.empty() || points.size() != targets.size())
    throw ValidationError("knn: points/targets size mismatch");
  if (k <= 0) throw ValidationError("knn: k must be positive");
  return KnnModel{points, targets, k};
}

int knn_predict(const KnnModel& model, const Vec& query) {
  auto idx = nearest(model, query);
  int votes = 0;
  for (std::size_t i : idx) votes += model.targets[i] > 0.5 ? 1 : -1;
  return votes > 0 ? 1 : 0;
}

double knn_regress(const KnnModel& model, const Vec& query) {
  auto idx = nearest(model, query);
  double s = 0.0;
  for (std::size_t i : idx) s += model.targets[i];
  return s / static_cast<double>(idx.size());
}

}  // namespace pitchml
