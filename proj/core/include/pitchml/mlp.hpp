#pragma once

#include <cstdint>

#include "pitchml/ml_types.hpp"

namespace pitchml {

enum class MlpHead { kSigmoid, kSoftmax, kLinear };

struct MlpHyper {
  double lr = 1e-2;
  int batch = 64;
  int epochs = 100;
  uint64_t seed = 0;
  double momentum = 0.9;
  double val_fraction = 0.1;  // internal held-out split for early stopping
  int patience = 10;
  std::vector<int> hidden = {20, 10};  // rectified linear layers
};

struct MlpModel {
  std::vector<int> layer_sizes;  // [input, hidden..., output]
  std::vector<Mat> weights;      // weights[l] is layer_sizes[l+1] x layer_sizes[l]
  std::vector<Vec> biases;
  MlpHead head = MlpHead::kSigmoid;

  Vec forward(const Vec& x) const;  // head activation applied
};

// Seeded uniform initialization scaled by 1/sqrt(fan_in).
MlpModel init_mlp(int input_dim, int output_dim, MlpHead head,
                  const std::vector<int>& hidden, uint64_t seed);

// Mean loss over the batch and its parameter gradients; used by training
// and by the finite-difference gradient check.
struct MlpGradients {
  double loss = 0.0;
  std::vector<Mat> d_weights;
  std::vector<Vec> d_biases;
};

MlpGradients mlp_loss_and_gradients(const MlpModel& m, const Mat& inputs,
                                    const Mat& targets);

double mlp_loss(const MlpModel& m, const Mat& inputs, const Mat& targets);

// Mini-batch SGD with momentum and early stopping on an internal split.
// Targets: sigmoid head expects one 0/1 value per row, softmax a one-hot
// row, linear the regression targets. Throws RuntimeError on NaN loss.
MlpModel fit_mlp(const Mat& inputs, const Mat& targets, MlpHead head,
                 const MlpHyper& hyper);

Mat one_hot(const std::vector<int>& labels, int n_classes);

}  // namespace pitchml
