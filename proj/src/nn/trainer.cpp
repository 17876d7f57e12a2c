#include "fds/nn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "fds/core/error.hpp"
#include "fds/nn/loss.hpp"
#include "fds/nn/optim.hpp"

namespace fds::nn {

namespace {

constexpr float kBrightnessJitter = 0.05f;

void flip_horizontal(Tensor& t) {
  if (t.rank() != 3) return;
  const int c = t.dim(0), h = t.dim(1), w = t.dim(2);
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y) {
      float* row = t.data() + (static_cast<std::size_t>(ch) * h + y) * w;
      std::reverse(row, row + w);
    }
}

LossResult sample_loss(const Network& net, const Example& ex, Objective objective, int loss_layer,
                       ForwardState& st) {
  st = net.forward(ex.input);
  const Tensor& pred = st.outputs[static_cast<std::size_t>(loss_layer)];
  return objective == Objective::MeanSquared ? mse_loss(pred, ex.target) : cross_entropy_loss(pred, ex.label);
}

std::mt19937_64 keyed_rng(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b, c};
  return std::mt19937_64(seq);
}

}  // namespace

Example augment_example(const Example& ex, std::mt19937_64& rng, float input_offset, float input_scale) {
  Example out = ex;
  std::bernoulli_distribution flip(0.5);
  std::uniform_real_distribution<float> gain(1.0f - kBrightnessJitter, 1.0f + kBrightnessJitter);
  if (flip(rng)) {
    flip_horizontal(out.input);
    flip_horizontal(out.target);
  }
  const float k = gain(rng);
  for (auto& v : out.input.vec()) {
    const float pixel = v / input_scale + input_offset;
    v = (std::clamp(pixel * k, 0.0f, 1.0f) - input_offset) * input_scale;
  }
  return out;
}

std::vector<double> train(Network& net, std::span<const Example> examples, const TrainOptions& opts,
                          const EpochCallback& on_epoch) {
  if (examples.empty()) raise(Errc::EmptyDataset, "no training examples");
  if (opts.epochs < 0 || opts.batch_size < 1) raise(Errc::InvalidArgument, "epochs/batch size");
  if (!(opts.learning_rate > 0.0f)) raise(Errc::InvalidArgument, "learning rate must be positive");
  const int loss_layer = opts.loss_layer < 0 ? net.size() - 1 : opts.loss_layer;
  const int n = static_cast<int>(examples.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> history;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    auto shuffle_rng = keyed_rng(opts.seed, 0x5f1eu, static_cast<std::uint32_t>(epoch), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += opts.batch_size) {
      const int bsz = std::min(opts.batch_size, n - start);
      std::vector<double> losses(static_cast<std::size_t>(bsz));
      std::vector<Gradients> grads(static_cast<std::size_t>(bsz));
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(bsz));
#pragma omp parallel for schedule(static)
      for (int b = 0; b < bsz; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        try {
          const int pos = start + b;
          const Example& src = examples[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])];
          Example ex;
          if (opts.augment) {
            auto rng = keyed_rng(opts.seed, 0xa06u, static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(pos));
            ex = augment_example(src, rng, opts.input_offset, opts.input_scale);
          }
          const Example& use = opts.augment ? ex : src;
          ForwardState st;
          LossResult lr = sample_loss(net, use, opts.objective, loss_layer, st);
          losses[ub] = lr.value;
          grads[ub] = net.backward(st, lr.grad, loss_layer);
        } catch (...) {
          errors[ub] = std::current_exception();
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
      Gradients total = std::move(grads[0]);
      for (int b = 1; b < bsz; ++b) total.add(grads[static_cast<std::size_t>(b)]);
      total.scale(1.0f / static_cast<float>(bsz));
      for (double l : losses) {
        if (!std::isfinite(l)) raise(Errc::DivergedNaN, "non-finite loss in epoch " + std::to_string(epoch));
        epoch_loss += l;
      }
      if (!total.all_finite()) raise(Errc::DivergedNaN, "non-finite gradient in epoch " + std::to_string(epoch));
      sgd_step(net, total, opts.learning_rate);
    }
    history.push_back(epoch_loss / n);
    if (on_epoch) on_epoch(epoch, history.back(), net);
  }
  return history;
}

double evaluate_loss(const Network& net, std::span<const Example> examples, Objective objective,
                     int loss_layer) {
  if (examples.empty()) raise(Errc::EmptyDataset, "no evaluation examples");
  if (loss_layer < 0) loss_layer = net.size() - 1;
  std::vector<double> losses(examples.size());
  std::vector<std::exception_ptr> errors(examples.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      ForwardState st;
      losses[i] = sample_loss(net, examples[i], objective, loss_layer, st).value;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
}

}  // namespace fds::nn
