#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "fds/nn/network.hpp"

namespace fds::nn {

struct Example {
  Tensor input;
  Tensor target;   // regression target (MeanSquared)
  int label = -1;  // class index (CrossEntropy)
};

enum class Objective { MeanSquared, CrossEntropy };

struct TrainOptions {
  int epochs = 1;
  float learning_rate = 1e-4f;
  int batch_size = 8;
  std::uint64_t seed = 0;
  Objective objective = Objective::MeanSquared;
  /// Layer whose output feeds the loss; -1 = output layer.
  int loss_layer = -1;
  /// Horizontal flips (input and spatial target) and +-5% input brightness.
  bool augment = true;
  /// How inputs encode a [0,1] image: stored = (pixel - offset) * scale.
  /// Brightness jitter is applied to the decoded pixel values.
  float input_offset = 0.0f;
  float input_scale = 1.0f;
};

/// Called after every epoch with the 0-based epoch index and the mean
/// per-sample training loss of that epoch.
using EpochCallback = std::function<void(int epoch, double mean_loss, const Network& net)>;

/// Random horizontal flip and brightness jitter drawn from `rng`; see
/// TrainOptions for the input encoding.
Example augment_example(const Example& ex, std::mt19937_64& rng, float input_offset = 0.0f,
                        float input_scale = 1.0f);

/// Minibatch SGD. Samples of a batch are evaluated in parallel and their
/// gradients summed in sample order, so results do not depend on thread
/// count. Returns the per-epoch mean loss; throws DivergedNaN on a
/// non-finite loss and EmptyDataset on an empty example list.
std::vector<double> train(Network& net, std::span<const Example> examples, const TrainOptions& opts,
                          const EpochCallback& on_epoch = {});

/// Mean loss over the examples without updating the network.
double evaluate_loss(const Network& net, std::span<const Example> examples, Objective objective,
                     int loss_layer = -1);

}  // namespace fds::nn
