#include "fds/nn/optim.hpp"

#include "fds/core/error.hpp"

namespace fds::nn {

void sgd_step(Network& net, const Gradients& grads, float learning_rate) {
  if (grads.per_layer.size() != static_cast<std::size_t>(net.size())) raise(Errc::ShapeMismatch, "gradients do not match network");
  for (int i = 0; i < net.size(); ++i) {
    auto& params = net.layer(i).params;
    const auto& g = grads.per_layer[static_cast<std::size_t>(i)];
    if (g.size() != params.size()) raise(Errc::ShapeMismatch, "gradient tensor count for layer " + std::to_string(i));
    for (std::size_t j = 0; j < params.size(); ++j) {
      if (g[j].shape() != params[j].shape()) raise(Errc::ShapeMismatch, "gradient shape for layer " + std::to_string(i));
    }
    if (!net.trainable(i)) continue;
    for (std::size_t j = 0; j < params.size(); ++j) {
      float* p = params[j].data();
      const float* d = g[j].data();
      for (std::size_t k = 0; k < params[j].size(); ++k) p[k] -= learning_rate * d[k];
    }
  }
}

}  // namespace fds::nn
