#include "pitchml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pitchml/errors.hpp"

namespace pitchml {

namespace {

Vec apply_head(Vec z, MlpHead head) {
  switch (head) {
    case MlpHead::kSigmoid:
      for (double& v : z) v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                                       : std::exp(v) / (1.0 + std::exp(v));
      return z;
    case MlpHead::kSoftmax: {
      const double m = *std::max_element(z.begin(), z.end());
      double s = 0.0;
      for (double& v : z) {
        v = std::exp(v - m);
        s += v;
      }
      for (double& v : z) v /= s;
      return z;
    }
    case MlpHead::kLinear:
      return z;
  }
  return z;
}

double sample_loss(const Vec& out, const Vec& target, MlpHead head) {
  constexpr double kEps = 1e-12;
  switch (head) {
    case MlpHead::kSigmoid: {
      double l = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) {
        l += -target[i] * std::log(out[i] + kEps) -
             (1.0 - target[i]) * std::log(1.0 - out[i] + kEps);
      }
      return l;
    }
    case MlpHead::kSoftmax: {
      double l = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (target[i] > 0.0) l += -target[i] * std::log(out[i] + kEps);
      }
      return l;
    }
    case MlpHead::kLinear: {
      double l = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = out[i] - target[i];
        l += 0.5 * d * d;
      }
      return l;
    }
  }
  return 0.0;
}

struct ForwardPass {
  std::vector<Vec> pre;   // pre-activations per layer
  std::vector<Vec> post;  // post-activations (post[0] is the input)
};

ForwardPass forward_all(const MlpModel& m, const Vec& x) {
  ForwardPass fp;
  fp.post.push_back(x);
  const std::size_t n_layers = m.weights.size();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Mat& W = m.weights[l];
    Vec z(m.biases[l]);
    const Vec& in = fp.post.back();
    for (std::size_t r = 0; r < W.size(); ++r) {
      double acc = z[r];
      for (std::size_t c = 0; c < in.size(); ++c) acc += W[r][c] * in[c];
      z[r] = acc;
    }
    fp.pre.push_back(z);
    if (l + 1 < n_layers) {
      for (double& v : z) v = std::max(v, 0.0);  // ReLU hidden layers
      fp.post.push_back(std::move(z));
    } else {
      fp.post.push_back(apply_head(std::move(z), m.head));
    }
  }
  return fp;
}

}  // namespace

Vec MlpModel::forward(const Vec& x) const {
  if (static_cast<int>(x.size()) != layer_sizes.front())
    throw ValidationError("mlp: input dimension mismatch");
  return forward_all(*this, x).post.back();
}

MlpModel init_mlp(int input_dim, int output_dim, MlpHead head,
                  const std::vector<int>& hidden, uint64_t seed) {
  MlpModel m;
  m.head = head;
  m.layer_sizes.push_back(input_dim);
  for (int h : hidden) m.layer_sizes.push_back(h);
  m.layer_sizes.push_back(output_dim);

  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const int fan_in = m.layer_sizes[l];
    const int fan_out = m.layer_sizes[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat W(static_cast<std::size_t>(fan_out), Vec(static_cast<std::size_t>(fan_in)));
    for (auto& row : W)
      for (double& v : row) v = u(rng);
    m.weights.push_back(std::move(W));
    m.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
  }
  return m;
}

MlpGradients mlp_loss_and_gradients(const MlpModel& m, const Mat& inputs,
                                    const Mat& targets) {
  if (inputs.empty() || inputs.size() != targets.size())
    throw ValidationError("mlp: inputs/targets size mismatch");
  const std::size_t n_layers = m.weights.size();
  MlpGradients g;
  g.d_weights.resize(n_layers);
  g.d_biases.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    g.d_weights[l].assign(m.weights[l].size(), Vec(m.weights[l][0].size(), 0.0));
    g.d_biases[l].assign(m.biases[l].size(), 0.0);
  }

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    ForwardPass fp = forward_all(m, inputs[i]);
    const Vec& out = fp.post.back();
    g.loss += sample_loss(out, targets[i], m.head);

    // For all three heads paired with their canonical loss the output-layer
    // delta is (out - target).
    Vec delta(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) delta[j] = out[j] - targets[i][j];

    for (std::size_t l = n_layers; l-- > 0;) {
      const Vec& in = fp.post[l];
      for (std::size_t r = 0; r < delta.size(); ++r) {
        g.d_biases[l][r] += delta[r];
        for (std::size_t c = 0; c < in.size(); ++c)
          g.d_weights[l][r][c] += delta[r] * in[c];
      }
      if (l == 0) break;
      Vec prev(in.size(), 0.0);
      for (std::size_t c = 0; c < in.size(); ++c) {
        if (fp.pre[l - 1][c] <= 0.0) continue;  // ReLU gate
        double acc = 0.0;
        for (std::size_t r = 0; r < delta.size(); ++r) acc += m.weights[l][r][c] * delta[r];
        prev[c] = acc;
      }
      delta = std::move(prev);
    }
  }

  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  g.loss *= inv_n;
  for (std::size_t l = 0; l < n_layers; ++l) {
    for (auto& row : g.d_weights[l])
      for (double& v : row) v *= inv_n;
    for (double& v : g.d_biases[l]) v *= inv_n;
  }
  return g;
}

double mlp_loss(const MlpModel& m, const Mat& inputs, const Mat& targets) {
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    loss += sample_loss(forward_all(m, inputs[i]).post.back(), targets[i], m.head);
  }
  return loss / static_cast<double>(inputs.size());
}

Mat one_hot(const std::vector<int>& labels, int n_classes) {
  Mat out(labels.size(), Vec(static_cast<std::size_t>(n_classes), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes)
      throw ValidationError("one_hot: label out of range");
    out[i][labels[i]] = 1.0;
  }
  return out;
}

MlpModel fit_mlp(const Mat& inputs, const Mat& targets, MlpHead head,
                 const MlpHyper& hyper) {
  if (inputs.empty() || inputs.size() != targets.size())
    throw ValidationError("fit_mlp: inputs/targets size mismatch");
  const int input_dim = static_cast<int>(inputs[0].size());
  const int output_dim = static_cast<int>(targets[0].size());

  MlpModel m = init_mlp(input_dim, output_dim, head, hyper.hidden, hyper.seed);
  if (hyper.epochs <= 0) return m;

  std::mt19937_64 rng(hyper.seed + 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = static_cast<std::size_t>(hyper.val_fraction * inputs.size());
  if (inputs.size() < 10) n_val = 0;  // too small for a split
  const std::size_t n_train = inputs.size() - n_val;
  Mat train_x, train_y, val_x, val_y;
  for (std::size_t i = 0; i < n_train; ++i) {
    train_x.push_back(inputs[order[i]]);
    train_y.push_back(targets[order[i]]);
  }
  for (std::size_t i = n_train; i < inputs.size(); ++i) {
    val_x.push_back(inputs[order[i]]);
    val_y.push_back(targets[order[i]]);
  }

  std::vector<Mat> vel_w;
  std::vector<Vec> vel_b;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    vel_w.emplace_back(m.weights[l].size(), Vec(m.weights[l][0].size(), 0.0));
    vel_b.emplace_back(m.biases[l].size(), 0.0);
  }

  MlpModel best = m;
  double best_val = std::numeric_limits<double>::infinity();
  int stale = 0;

  std::vector<std::size_t> idx(train_x.size());
  std::iota(idx.begin(), idx.end(), 0);

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t start = 0; start < idx.size();
         start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t stop =
          std::min(idx.size(), start + static_cast<std::size_t>(hyper.batch));
      Mat bx, by;
      bx.reserve(stop - start);
      by.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        bx.push_back(train_x[idx[i]]);
        by.push_back(train_y[idx[i]]);
      }
      MlpGradients g = mlp_loss_and_gradients(m, bx, by);
      if (!std::isfinite(g.loss))
        throw RuntimeError("fit_mlp: non-finite loss at epoch " + std::to_string(epoch));
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (std::size_t r = 0; r < m.weights[l].size(); ++r) {
          for (std::size_t c = 0; c < m.weights[l][r].size(); ++c) {
            vel_w[l][r][c] = hyper.momentum * vel_w[l][r][c] - hyper.lr * g.d_weights[l][r][c];
            m.weights[l][r][c] += vel_w[l][r][c];
          }
          vel_b[l][r] = hyper.momentum * vel_b[l][r] - hyper.lr * g.d_biases[l][r];
          m.biases[l][r] += vel_b[l][r];
        }
      }
    }

    if (!val_x.empty()) {
      const double vl = mlp_loss(m, val_x, val_y);
      if (vl < best_val - 1e-12) {
        best_val = vl;
        best = m;
        stale = 0;
      } else if (++stale >= hyper.patience) {
        return best;
      }
    }
  }
  return val_x.empty() ? m : best;
}

}  // namespace pitchml
