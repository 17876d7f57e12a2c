#pragma once

#include "fds/nn/network.hpp"

namespace fds::nn {

/// Plain SGD: p <- p - lr * g for every trainable parameter. Frozen layers
/// are left bit-unchanged. Throws ShapeMismatch if `grads` is not aligned
/// with the network.
void sgd_step(Network& net, const Gradients& grads, float learning_rate);

}  // namespace fds::nn
