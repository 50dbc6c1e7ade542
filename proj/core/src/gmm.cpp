#include "pitchml/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pitchml/errors.hpp"
#include "pitchml/kmeans.hpp"

namespace pitchml {

namespace {
constexpr double kVarFloor = 1e-6;

// log N(x | mean, diag var) for one component
double log_gauss(const Vec& x, const Vec& mean, const Vec& var) {
  double lp = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - mean[j];
    lp += -0.5 * (std::log(2.0 * M_PI * var[j]) + d * d / var[j]);
  }
  return lp;
}

double logsumexp(const Vec& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}
}  // namespace

Vec GmmModel::responsibilities(const Vec& x) const {
  const int k = components();
  Vec lp(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    lp[c] = std::log(std::max(weights[c], 1e-300)) + log_gauss(x, means[c], variances[c]);
  }
  const double lse = logsumexp(lp);
  Vec r(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) r[c] = std::exp(lp[c] - lse);
  return r;
}

int GmmModel::assign(const Vec& x) const {
  Vec r = responsibilities(x);
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

double GmmModel::mean_log_likelihood(const Mat& data) const {
  const int k = components();
  double total = 0.0;
  Vec lp(static_cast<std::size_t>(k));
  for (const Vec& x : data) {
    for (int c = 0; c < k; ++c) {
      lp[c] = std::log(std::max(weights[c], 1e-300)) + log_gauss(x, means[c], variances[c]);
    }
    total += logsumexp(lp);
  }
  return total / static_cast<double>(data.size());
}

GmmModel fit_gmm(const Mat& data, int k, uint64_t seed) {
  if (k <= 0) throw ValidationError("k must be positive");
  if (static_cast<int>(data.size()) < 2 * k)
    throw ValidationError("fit_gmm needs at least 2k points");
  const std::size_t n = data.size();
  const std::size_t dim = data[0].size();

  // collapse check: a mixture over identical points has no valid variances
  bool any_spread = false;
  for (std::size_t i = 1; i < n && !any_spread; ++i) {
    if (data[i] != data[0]) any_spread = true;
  }
  if (!any_spread)
    throw ValidationError("fit_gmm: variance collapse, all points are identical");

  KMeansModel km = fit_kmeans(data, k, seed);
  GmmModel m;
  m.weights.assign(static_cast<std::size_t>(k), 0.0);
  m.means.assign(static_cast<std::size_t>(k), Vec(dim, 0.0));
  m.variances.assign(static_cast<std::size_t>(k), Vec(dim, 0.0));

  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (const Vec& x : data) {
    const int c = km.assign(x);
    ++counts[c];
    for (std::size_t j = 0; j < dim; ++j) m.means[c][j] += x[j];
  }
  for (int c = 0; c < k; ++c) {
    const double cnt = std::max<double>(1.0, static_cast<double>(counts[c]));
    m.weights[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    for (std::size_t j = 0; j < dim; ++j) m.means[c][j] /= cnt;
  }
  for (const Vec& x : data) {
    const int c = km.assign(x);
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = x[j] - m.means[c][j];
      m.variances[c][j] += d * d;
    }
  }
  for (int c = 0; c < k; ++c) {
    const double cnt = std::max<double>(1.0, static_cast<double>(counts[c]));
    for (std::size_t j = 0; j < dim; ++j)
      m.variances[c][j] = std::max(m.variances[c][j] / cnt, kVarFloor);
    if (m.weights[c] <= 0.0) m.weights[c] = 1e-10;
  }

  Mat resp(n, Vec(static_cast<std::size_t>(k)));
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    // E step
    double ll = 0.0;
    Vec lp(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        lp[c] = std::log(std::max(m.weights[c], 1e-300)) +
                log_gauss(data[i], m.means[c], m.variances[c]);
      }
      const double lse = logsumexp(lp);
      ll += lse;
      for (int c = 0; c < k; ++c) resp[i][c] = std::exp(lp[c] - lse);
    }
    ll /= static_cast<double>(n);
    m.log_likelihood_trace.push_back(ll);
    if (ll - prev_ll < 1e-6 && iter > 0) break;
    prev_ll = ll;

    // M step with variance floor
    for (int c = 0; c < k; ++c) {
      double nk = 0.0;
      Vec mu(dim, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i][c];
        for (std::size_t j = 0; j < dim; ++j) mu[j] += resp[i][c] * data[i][j];
      }
      if (nk < 1e-10) nk = 1e-10;
      for (std::size_t j = 0; j < dim; ++j) mu[j] /= nk;
      Vec var(dim, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          const double d = data[i][j] - mu[j];
          var[j] += resp[i][c] * d * d;
        }
      }
      for (std::size_t j = 0; j < dim; ++j) var[j] = std::max(var[j] / nk, kVarFloor);
      m.weights[c] = nk / static_cast<double>(n);
      m.means[c] = std::move(mu);
      m.variances[c] = std::move(var);
    }
    double wsum = 0.0;
    for (double w : m.weights) wsum += w;
    for (double& w : m.weights) w /= wsum;
  }
  return m;
}

}  // namespace pitchml
