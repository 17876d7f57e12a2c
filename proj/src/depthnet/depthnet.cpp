#include "fds/depthnet/depthnet.hpp"

#include <cmath>
#include <exception>

#include "fds/core/error.hpp"
#include "fds/nn/trainer.hpp"

namespace fds::depthnet {

using nn::LayerKind;
using nn::LayerSpec;

int DepthNetConfig::filters(const ConvRow& row) const {
  if (row.filters == 1) return 1;
  return static_cast<int>(std::lround(row.filters * width_scale));
}

void DepthNetConfig::validate() const {
  if (height < 8 || width < 8 || height % 8 || width % 8) {
    raise(Errc::ConfigInvalid, "depthnet input dims must be positive multiples of 8");
  }
  if (!(width_scale > 0.0)) raise(Errc::ConfigInvalid, "width_scale must be positive");
  for (const auto& r : kEncoderTable)
    if (filters(r) < 1) raise(Errc::ConfigInvalid, std::string(r.name) + " scales to zero filters");
  for (const auto& r : kDecoderTable)
    if (filters(r) < 1) raise(Errc::ConfigInvalid, std::string(r.name) + " scales to zero filters");
}

DepthNet build_depthnet(const DepthNetConfig& config) {
  config.validate();
  DepthNet dn{config, nn::Network({1, config.height, config.width}), -1, -1, {}};
  nn::Network& net = dn.net;
  int ch = 1;
  auto conv = [&](const ConvRow& row) {
    const int f = config.filters(row);
    net.add(LayerSpec::conv2d(row.kernel, ch, f, row.stride, row.name));
    ch = f;
  };
  auto relu = [&](const char* of) { return net.add(LayerSpec::simple(LayerKind::ReLU, std::string(of) + "_relu")); };

  std::array<int, 7> enc{};
  for (std::size_t i = 0; i < kEncoderTable.size(); ++i) {
    conv(kEncoderTable[i]);
    enc[i] = relu(kEncoderTable[i].name);
  }
  dn.latent_layer = enc[6];

  // skip sources for Cat1..Cat3 (Cat4 reads the network input)
  const std::array<int, 3> skip = {enc[4], enc[2], enc[0]};
  for (int stage = 0; stage < 3; ++stage) {
    conv(kDecoderTable[static_cast<std::size_t>(2 * stage)]);
    relu(kDecoderTable[static_cast<std::size_t>(2 * stage)].name);
    conv(kDecoderTable[static_cast<std::size_t>(2 * stage + 1)]);
    relu(kDecoderTable[static_cast<std::size_t>(2 * stage + 1)].name);
    net.add(LayerSpec::simple(LayerKind::Upsample2x, "Up" + std::to_string(stage + 1)));
    const int src = skip[static_cast<std::size_t>(stage)];
    dn.concat_layers[static_cast<std::size_t>(stage)] =
        net.add(LayerSpec::concat(src, "Cat" + std::to_string(stage + 1)));
    ch += net.shape_of(src)[0];
  }
  conv(kDecoderTable[6]);
  relu(kDecoderTable[6].name);
  conv(kDecoderTable[7]);
  relu(kDecoderTable[7].name);
  dn.concat_layers[3] = net.add(LayerSpec::concat(nn::kNetworkInput, "Cat4"));
  ch += 1;
  conv(kDecoderTable[8]);
  dn.preclamp_layer = net.size() - 1;
  net.add(LayerSpec::simple(LayerKind::Clamp01, "Clamp"));
  net.init_params(config.init_seed);
  return dn;
}

nn::Tensor image_tensor(const Image& img) {
  std::vector<float> v(img.px.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (img.px[i] - kInputOffset) * kInputScale;
  return nn::Tensor({1, img.h, img.w}, std::move(v));
}

namespace {

void check_image(const DepthNet& dn, const Image& image) {
  if (image.h != dn.config.height || image.w != dn.config.width) {
    raise(Errc::ShapeMismatch, "image " + std::to_string(image.h) + "x" + std::to_string(image.w) +
                                   " does not match depthnet input");
  }
}

DepthMap to_depth(const nn::Tensor& out, int h, int w) {
  Image img(h, w, out.vec());
  return DepthMap(std::move(img));
}

}  // namespace

nn::Tensor encode(const DepthNet& dn, const Image& image) {
  check_image(dn, image);
  auto st = dn.net.forward(image_tensor(image));
  return st.outputs[static_cast<std::size_t>(dn.latent_layer)];
}

DepthMap predict_depth(const DepthNet& dn, const Image& image) {
  check_image(dn, image);
  return to_depth(dn.net.forward(image_tensor(image)).output(), image.h, image.w);
}

DepthMap predict_depth_without_skip(const DepthNet& dn, const Image& image, int concat_index) {
  check_image(dn, image);
  if (concat_index < 0 || concat_index > 3) raise(Errc::InvalidArgument, "concat index must be 0..3");
  const int cat = dn.concat_layers[static_cast<std::size_t>(concat_index)];
  const int keep = dn.net.shape_of(dn.net.layer(cat).input)[0];
  auto hook = [&](int layer, nn::Tensor& out) {
    if (layer != cat) return;
    const std::size_t plane = static_cast<std::size_t>(out.dim(1)) * out.dim(2);
    std::fill(out.vec().begin() + static_cast<std::ptrdiff_t>(plane * keep), out.vec().end(), 0.0f);
  };
  return to_depth(dn.net.forward(image_tensor(image), hook).output(), image.h, image.w);
}

std::vector<double> train_depthnet(DepthNet& dn, std::span<const DepthPair> samples,
                                   const TrainRecipe& recipe, const nn::EpochCallback& on_epoch) {
  if (samples.empty()) raise(Errc::EmptyDataset, "depthnet training set is empty");
  if (!(recipe.learning_rate > 0.0f)) raise(Errc::InvalidArgument, "learning rate must be positive");
  std::vector<nn::Example> examples;
  examples.reserve(samples.size());
  for (const auto& s : samples) {
    check_image(dn, s.image);
    if (s.depth.h() != s.image.h || s.depth.w() != s.image.w) raise(Errc::ShapeMismatch, "depth/image dims differ");
    examples.push_back({image_tensor(s.image), nn::Tensor({1, s.depth.h(), s.depth.w()}, s.depth.values()), -1});
  }
  dn.net.unfreeze_all();
  nn::TrainOptions opts;
  opts.epochs = recipe.epochs;
  opts.learning_rate = recipe.learning_rate;
  opts.batch_size = recipe.batch_size;
  opts.seed = recipe.seed;
  opts.objective = nn::Objective::MeanSquared;
  opts.loss_layer = dn.preclamp_layer;
  opts.augment = recipe.augment;
  opts.input_offset = kInputOffset;
  opts.input_scale = kInputScale;
  return nn::train(dn.net, examples, opts, on_epoch);
}

double depth_mse(const DepthNet& dn, std::span<const DepthPair> samples) {
  if (samples.empty()) raise(Errc::EmptyDataset, "no samples");
  std::vector<double> mse(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      const DepthMap pred = predict_depth(dn, samples[i].image);
      double s = 0.0;
      for (std::size_t k = 0; k < pred.values().size(); ++k) {
        const double d = static_cast<double>(pred.values()[k]) - samples[i].depth.values()[k];
        s += d * d;
      }
      mse[i] = s / static_cast<double>(pred.values().size());
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  double total = 0.0;
  for (double m : mse) total += m;
  return total / static_cast<double>(mse.size());
}

}  // namespace fds::depthnet
