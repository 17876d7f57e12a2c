#include "fds/nn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "fds/core/error.hpp"

namespace fds::nn {

LossResult mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) {
    raise(Errc::ShapeMismatch, "mse " + shape_str(pred.shape()) + " vs " + shape_str(target.shape()));
  }
  if (pred.empty()) raise(Errc::ShapeMismatch, "mse of empty tensors");
  const double n = static_cast<double>(pred.size());
  LossResult r{0.0, Tensor(pred.shape())};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - target[i];
    r.value += d * d;
    r.grad[i] = static_cast<float>(2.0 * d / n);
  }
  r.value /= n;
  return r;
}

LossResult cross_entropy_loss(const Tensor& logits, int label) {
  if (logits.rank() != 1 || logits.empty()) raise(Errc::ShapeMismatch, "cross entropy expects a logit vector");
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
    raise(Errc::LabelOutOfRange, "label " + std::to_string(label) + " for " + std::to_string(logits.size()) + " classes");
  }
  const double mx = *std::max_element(logits.vec().begin(), logits.vec().end());
  double z = 0.0;
  for (float v : logits.vec()) z += std::exp(v - mx);
  const double log_z = std::log(z) + mx;
  LossResult r{log_z - logits[static_cast<std::size_t>(label)], Tensor(logits.shape())};
  for (std::size_t i = 0; i < logits.size(); ++i) r.grad[i] = static_cast<float>(std::exp(logits[i] - log_z));
  r.grad[static_cast<std::size_t>(label)] -= 1.0f;
  return r;
}

}  // namespace fds::nn
