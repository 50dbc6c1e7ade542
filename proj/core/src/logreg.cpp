#include "pitchml/logreg.hpp"

#include <cmath>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// numerically safe cross-entropy for label y in {0,1} and logit z
double xent(double z, int y) {
  // log(1 + exp(z)) - y*z, stable form
  const double soft = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return soft - y * z;
}

struct Objective {
  double value = 0.0;
  Vec grad_w;
  double grad_b = 0.0;
};

Objective evaluate(const Mat& X, const std::vector<int>& y, const Vec& w, double b,
                   double lambda) {
  const std::size_t n = X.size();
  const std::size_t d = w.size();
  Objective obj;
  obj.grad_w.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i][j];
    obj.value += xent(z, y[i]);
    const double err = sigmoid(z) - y[i];
    for (std::size_t j = 0; j < d; ++j) obj.grad_w[j] += err * X[i][j];
    obj.grad_b += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  obj.value *= inv_n;
  obj.grad_b *= inv_n;
  double reg = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    obj.grad_w[j] = obj.grad_w[j] * inv_n + lambda * w[j];
    reg += w[j] * w[j];
  }
  obj.value += 0.5 * lambda * reg;
  return obj;
}

}  // namespace

double LogRegModel::probability(const Vec& x) const {
  if (x.size() != weights.size()) throw ValidationError("logreg dimension mismatch");
  double z = bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return sigmoid(z);
}

bool LogRegModel::predict(const Vec& x, double threshold) const {
  return probability(x) > threshold;
}

LogRegModel fit_logreg(const Mat& data, const std::vector<int>& labels,
                       double l2_lambda) {
  if (data.empty() || data.size() != labels.size())
    throw ValidationError("fit_logreg: data/label size mismatch");
  bool has0 = false, has1 = false;
  for (int y : labels) {
    if (y == 0) has0 = true;
    else if (y == 1) has1 = true;
    else throw ValidationError("fit_logreg: labels must be 0/1");
  }
  if (!has0 || !has1) throw ValidationError("fit_logreg: single-class labels");

  const std::size_t d = data[0].size();
  LogRegModel m;
  m.weights.assign(d, 0.0);
  m.l2_lambda = l2_lambda;

  Objective obj = evaluate(data, labels, m.weights, m.bias, l2_lambda);
  double step = 1.0;
  for (int iter = 0; iter < 5000; ++iter) {
    double g2 = obj.grad_b * obj.grad_b;
    for (double g : obj.grad_w) g2 += g * g;
    m.final_grad_norm = std::sqrt(g2);
    if (m.final_grad_norm < 1e-6) break;

    // backtracking line search (Armijo)
    step = std::min(step * 2.0, 1e6);
    Vec w_next(d);
    double b_next = 0.0;
    Objective next;
    while (true) {
      for (std::size_t j = 0; j < d; ++j) w_next[j] = m.weights[j] - step * obj.grad_w[j];
      b_next = m.bias - step * obj.grad_b;
      next = evaluate(data, labels, w_next, b_next, l2_lambda);
      if (next.value <= obj.value - 0.5 * step * g2 || step < 1e-18) break;
      step *= 0.5;
    }
    m.weights = std::move(w_next);
    m.bias = b_next;
    obj = std::move(next);
  }
  return m;
}

}  // namespace pitchml
