#include "pitchml/kmeans.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

Mat kmeanspp_init(const Mat& data, int k, std::mt19937_64& rng) {
  const std::size_t n = data.size();
  Mat centroids;
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  centroids.push_back(data[first(rng)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const Vec& c : centroids) best = std::min(best, sq_dist(data[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng), acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);  // all points coincide with a centroid
    }
    centroids.push_back(data[pick]);
  }
  return centroids;
}

KMeansModel lloyd(const Mat& data, int k, std::mt19937_64& rng) {
  const std::size_t n = data.size();
  const std::size_t dim = data[0].size();
  KMeansModel m;
  m.centroids = kmeanspp_init(data, k, rng);

  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int who = 0;
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(data[i], m.centroids[c]);
        if (d < best) {
          best = d;
          who = c;
        }
      }
      assign[i] = who;
      inertia += best;
    }
    m.inertia = inertia;
    m.inertia_trace.push_back(inertia);

    Mat next(k, Vec(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) next[assign[i]][j] += data[i][j];
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed an empty cluster at the point farthest from its centroid
        std::size_t far = 0;
        double worst = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = sq_dist(data[i], m.centroids[assign[i]]);
          if (d > worst) {
            worst = d;
            far = i;
          }
        }
        next[c] = data[far];
      } else {
        for (std::size_t j = 0; j < dim; ++j) next[c][j] /= static_cast<double>(counts[c]);
      }
    }

    double movement = 0.0;
    for (int c = 0; c < k; ++c) movement = std::max(movement, std::sqrt(sq_dist(next[c], m.centroids[c])));
    m.centroids = std::move(next);
    if (movement < 1e-6) break;
  }

  for (int a = 0; a < k && !m.degenerate; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (sq_dist(m.centroids[a], m.centroids[b]) == 0.0) {
        m.degenerate = true;
        break;
      }
    }
  }
  return m;
}

}  // namespace

int KMeansModel::assign(const Vec& x) const {
  double best = std::numeric_limits<double>::max();
  int who = 0;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(x, centroids[c]);
    if (d < best) {
      best = d;
      who = static_cast<int>(c);
    }
  }
  return who;
}

KMeansModel fit_kmeans(const Mat& data, int k, uint64_t seed, int restarts) {
  if (k <= 0) throw ValidationError("k must be positive");
  if (static_cast<int>(data.size()) < k)
    throw ValidationError("fit_kmeans: fewer points than clusters");
  KMeansModel best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<uint64_t>(r));
    KMeansModel m = lloyd(data, k, rng);
    if (!have || m.inertia < best.inertia) {
      best = std::move(m);
      have = true;
    }
  }
  return best;
}

}  // namespace pitchml
