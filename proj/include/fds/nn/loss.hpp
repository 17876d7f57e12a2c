#pragma once

#include "fds/nn/tensor.hpp"

namespace fds::nn {

struct LossResult {
  double value = 0.0;
  Tensor grad;  // d(loss)/d(prediction)
};

/// (1/n) * sum (target - pred)^2 over all n elements; grad = (2/n)(pred - target).
LossResult mse_loss(const Tensor& pred, const Tensor& target);

/// -log softmax(logits)[label]; grad = softmax(logits) - onehot(label).
LossResult cross_entropy_loss(const Tensor& logits, int label);

}  // namespace fds::nn
