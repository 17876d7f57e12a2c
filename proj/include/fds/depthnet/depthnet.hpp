#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fds/core/image.hpp"
#include "fds/nn/network.hpp"
#include "fds/nn/trainer.hpp"

namespace fds::depthnet {

/// One row of the encoder/decoder layer table.
struct ConvRow {
  const char* name;
  int kernel;
  int filters;  // at width_scale 1
  int stride;
};

/// Encoder Conv1..Conv7. Strides place the three downsamplings that the
/// decoder's three upsamplings invert.
inline constexpr std::array<ConvRow, 7> kEncoderTable = {{
    {"Conv1", 5, 32, 1},
    {"Conv2", 3, 64, 2},
    {"Conv3", 3, 64, 1},
    {"Conv4", 3, 128, 2},
    {"Conv5", 3, 128, 1},
    {"Conv6", 3, 256, 2},
    {"Conv7", 3, 256, 1},
}};

/// Decoder D_conv1..D_conv9.
inline constexpr std::array<ConvRow, 9> kDecoderTable = {{
    {"D_conv1", 3, 256, 1},
    {"D_conv2", 3, 256, 1},
    {"D_conv3", 3, 128, 1},
    {"D_conv4", 3, 128, 1},
    {"D_conv5", 3, 64, 1},
    {"D_conv6", 3, 64, 1},
    {"D_conv7", 3, 32, 1},
    {"D_conv8", 3, 32, 1},
    {"D_conv9", 3, 1, 1},
}};

struct DepthNetConfig {
  int height = 64;
  int width = 64;
  double width_scale = 0.25;
  std::uint64_t init_seed = 0;

  /// Filter count of a table row after scaling (rounded, at least 1 or the
  /// config is invalid). The single-filter output layer is never scaled.
  int filters(const ConvRow& row) const;
  /// Throws ConfigInvalid.
  void validate() const;
};

/// Built network plus the ids of the layers other code needs to address.
struct DepthNet {
  DepthNetConfig config;
  nn::Network net;
  int latent_layer = -1;     // Conv7 activation
  int preclamp_layer = -1;   // D_conv9 (linear output before the clamp)
  std::array<int, 4> concat_layers{};  // Cat1..Cat4
};

/// Encoder Conv1..Conv7 (ReLU after each), decoder D_conv1..D_conv8 with
/// upsample-then-concat skips Cat1<-Conv5, Cat2<-Conv3, Cat3<-Conv1 and
/// Cat4<-input, then D_conv9 (linear) clamped to [0,1].
DepthNet build_depthnet(const DepthNetConfig& config);

// Network input encoding of a [0,1] luma image: (pixel - offset) * scale.
inline constexpr float kInputOffset = 0.5f;
inline constexpr float kInputScale = 4.0f;

nn::Tensor image_tensor(const Image& img);

/// Conv7 activation for an image of the configured size.
nn::Tensor encode(const DepthNet& dn, const Image& image);

DepthMap predict_depth(const DepthNet& dn, const Image& image);

/// Prediction with the skip branch of one concat (0-based: Cat1..Cat4)
/// replaced by zeros.
DepthMap predict_depth_without_skip(const DepthNet& dn, const Image& image, int concat_index);

enum class Stage { Pretrain, Finetune };

struct TrainRecipe {
  Stage stage = Stage::Finetune;
  int epochs = 10;
  float learning_rate = 0.01f;
  int batch_size = 8;
  std::uint64_t seed = 0;
  bool augment = true;
  std::string dataset_tag;
};

struct DepthPair {
  Image image;
  DepthMap depth;
};

/// Minimizes pixel MSE between the prediction and the ground-truth depth
/// with SGD. The loss is taken on the linear output ahead of the clamp so
/// out-of-range predictions still receive gradient. Both stages train every
/// parameter; Finetune simply starts from whatever weights `dn` holds.
/// Returns the per-epoch mean loss.
std::vector<double> train_depthnet(DepthNet& dn, std::span<const DepthPair> samples,
                                   const TrainRecipe& recipe, const nn::EpochCallback& on_epoch = {});

/// Mean pixel MSE of clamped predictions.
double depth_mse(const DepthNet& dn, std::span<const DepthPair> samples);

}  // namespace fds::depthnet
