#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fds/core/image.hpp"
#include "fds/nn/network.hpp"
#include "fds/nn/trainer.hpp"
#include "fds/synth/scene.hpp"

namespace fds::spoofclf {

enum class Mode { TwoClass, MultiClass };

std::string_view mode_name(Mode m);
/// Accepts "two" / "multi"; throws ConfigInvalid otherwise.
Mode parse_mode(std::string_view s);
int class_count(Mode m);
/// Label index of an attack class under a mode (two-class: Real=0, Spoof=1).
int label_of(synth::AttackClass c, Mode m);
std::string_view label_name(int label, Mode m);

/// VGG-19 conv layout: blocks of 2,2,4,4,4 3x3 convs, each block followed
/// by a 2x2 max pool.
inline constexpr std::array<int, 5> kBlockDepths = {2, 2, 4, 4, 4};
inline constexpr std::array<int, 5> kBlockFilters = {64, 128, 256, 512, 512};
inline constexpr int kConvLayerCount = 16;

// Reference fine-tuning hyperparameters; the desk pipeline overrides the rate.
inline constexpr float kDefaultLearningRate = 1e-4f;
inline constexpr int kDefaultEpochsTwoClass = 50;
inline constexpr int kDefaultEpochsMultiClass = 200;

int default_epochs(Mode m);

/// Depth maps enter the network as (depth - kMapOffset) * kMapScale.
inline constexpr float kMapOffset = 0.5f;
inline constexpr float kMapScale = 4.0f;

struct ClassifierConfig {
  Mode mode = Mode::TwoClass;
  int height = 64;
  int width = 64;
  double width_scale = 0.125;
  int dense_width = 64;
  /// Output classes; 0 = derived from mode. Used by the pretraining head.
  int classes_override = 0;

  int classes() const { return classes_override > 0 ? classes_override : class_count(mode); }
  int block_filters(int block) const;
  /// Throws ConfigInvalid.
  void validate() const;
};

struct Classifier {
  ClassifierConfig config;
  nn::Network net;
  std::vector<int> conv_layers;   // 16 ids, in order
  std::array<int, 2> dense_layers{};
  int logits_layer = -1;          // second dense, ahead of softmax
};

/// 16 convs + 5 pools + flatten + dense(ReLU) + dense + softmax, He-init from
/// `seed`, with the fine-tuning freeze policy applied.
Classifier build_classifier(const ClassifierConfig& config, std::uint64_t seed);

/// Freezes every conv layer except the last; dense layers stay trainable.
void apply_freeze_policy(Classifier& clf);

struct Prediction {
  std::vector<float> scores;       // softmax probabilities
  std::vector<int> ranked_classes; // descending score, ties by class index
};

struct LabeledMap {
  DepthMap map;
  int label = 0;
};

struct FitRecipe {
  int epochs = 1;
  float learning_rate = kDefaultLearningRate;
  int batch_size = 8;
  std::uint64_t seed = 0;
  bool augment = true;
};

/// Trains every layer (freeze flags cleared) on a generic multi-class task
/// and returns the per-epoch loss. The network's head must already match
/// the task's class count (>= 4).
std::vector<double> pretrain_backbone(Classifier& clf, std::span<const LabeledMap> samples,
                                      const FitRecipe& recipe);

/// Classifier for `config` whose 16 conv layers are copied from a
/// pretrained backbone; the dense head is freshly initialised from `seed`
/// and the freeze policy applied.
Classifier transfer_backbone(const Classifier& backbone, const ClassifierConfig& config,
                             std::uint64_t seed);

/// SGD on the unfrozen parameters only (frozen convs stay bit-identical).
std::vector<double> finetune(Classifier& clf, std::span<const LabeledMap> samples, const FitRecipe& recipe,
                             const nn::EpochCallback& on_epoch = {});

Prediction predict(const Classifier& clf, const DepthMap& map);

/// Fraction of samples whose top-ranked class equals the label.
double accuracy(const Classifier& clf, std::span<const LabeledMap> samples);

}  // namespace fds::spoofclf
