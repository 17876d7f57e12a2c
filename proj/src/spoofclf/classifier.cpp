#include "fds/spoofclf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "fds/core/error.hpp"

namespace fds::spoofclf {

using nn::LayerKind;
using nn::LayerSpec;

std::string_view mode_name(Mode m) { return m == Mode::TwoClass ? "two" : "multi"; }

Mode parse_mode(std::string_view s) {
  if (s == "two") return Mode::TwoClass;
  if (s == "multi") return Mode::MultiClass;
  raise(Errc::ConfigInvalid, "classifier mode must be 'two' or 'multi', got '" + std::string(s) + "'");
}

int class_count(Mode m) { return m == Mode::TwoClass ? 2 : synth::kClassCount; }

int label_of(synth::AttackClass c, Mode m) {
  if (m == Mode::TwoClass) return synth::is_spoof(c) ? 1 : 0;
  return synth::class_index(c);
}

std::string_view label_name(int label, Mode m) {
  if (m == Mode::TwoClass) return label == 0 ? "Real" : "Spoof";
  return synth::class_name(static_cast<synth::AttackClass>(label));
}

int default_epochs(Mode m) { return m == Mode::TwoClass ? kDefaultEpochsTwoClass : kDefaultEpochsMultiClass; }

int ClassifierConfig::block_filters(int block) const {
  return static_cast<int>(std::lround(kBlockFilters[static_cast<std::size_t>(block)] * width_scale));
}

void ClassifierConfig::validate() const {
  if (height < 32 || width < 32 || height % 32 || width % 32) {
    raise(Errc::ConfigInvalid, "classifier input dims must be multiples of 32 (five 2x2 pools)");
  }
  if (!(width_scale > 0.0)) raise(Errc::ConfigInvalid, "width_scale must be positive");
  for (int b = 0; b < 5; ++b)
    if (block_filters(b) < 1) raise(Errc::ConfigInvalid, "block " + std::to_string(b + 1) + " scales to zero filters");
  if (dense_width < 1) raise(Errc::ConfigInvalid, "dense width must be positive");
  if (classes() < 2) raise(Errc::ConfigInvalid, "need at least two classes");
}

Classifier build_classifier(const ClassifierConfig& config, std::uint64_t seed) {
  config.validate();
  Classifier clf{config, nn::Network({1, config.height, config.width}), {}, {}, -1};
  nn::Network& net = clf.net;
  int ch = 1;
  int conv_no = 0;
  for (int b = 0; b < 5; ++b) {
    const int f = config.block_filters(b);
    for (int k = 0; k < kBlockDepths[static_cast<std::size_t>(b)]; ++k) {
      ++conv_no;
      const std::string name = "conv" + std::to_string(b + 1) + "_" + std::to_string(k + 1);
      clf.conv_layers.push_back(net.add(LayerSpec::conv2d(3, ch, f, 1, name)));
      net.add(LayerSpec::simple(LayerKind::ReLU, name + "_relu"));
      ch = f;
    }
    net.add(LayerSpec::simple(LayerKind::MaxPool2x2, "pool" + std::to_string(b + 1)));
  }
  net.add(LayerSpec::simple(LayerKind::Flatten, "flatten"));
  const int flat = net.output_shape()[0];
  clf.dense_layers[0] = net.add(LayerSpec::dense(flat, config.dense_width, "dense1"));
  net.add(LayerSpec::simple(LayerKind::ReLU, "dense1_relu"));
  clf.dense_layers[1] = net.add(LayerSpec::dense(config.dense_width, config.classes(), "dense2"));
  clf.logits_layer = clf.dense_layers[1];
  net.add(LayerSpec::simple(LayerKind::Softmax, "softmax"));
  net.init_params(seed);
  apply_freeze_policy(clf);
  return clf;
}

void apply_freeze_policy(Classifier& clf) {
  for (std::size_t i = 0; i < clf.conv_layers.size(); ++i) {
    clf.net.set_frozen(clf.conv_layers[i], i + 1 != clf.conv_layers.size());
  }
  for (int d : clf.dense_layers) clf.net.set_frozen(d, false);
}

namespace {

nn::Tensor map_tensor(const Classifier& clf, const DepthMap& m) {
  if (m.h() != clf.config.height || m.w() != clf.config.width) {
    raise(Errc::ShapeMismatch, "depth map " + std::to_string(m.h()) + "x" + std::to_string(m.w()) +
                                   " does not match classifier input");
  }
  nn::Tensor t({1, m.h(), m.w()}, m.values());
  for (auto& v : t.vec()) v = (v - kMapOffset) * kMapScale;
  return t;
}

std::vector<double> fit(Classifier& clf, std::span<const LabeledMap> samples, const FitRecipe& recipe,
                        const nn::EpochCallback& on_epoch) {
  if (samples.empty()) raise(Errc::EmptyDataset, "classifier training set is empty");
  std::vector<nn::Example> examples;
  examples.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.label < 0 || s.label >= clf.config.classes()) raise(Errc::LabelOutOfRange, "label " + std::to_string(s.label));
    examples.push_back({map_tensor(clf, s.map), nn::Tensor(), s.label});
  }
  nn::TrainOptions opts;
  opts.epochs = recipe.epochs;
  opts.learning_rate = recipe.learning_rate;
  opts.batch_size = recipe.batch_size;
  opts.seed = recipe.seed;
  opts.objective = nn::Objective::CrossEntropy;
  opts.loss_layer = clf.logits_layer;
  opts.augment = recipe.augment;
  opts.input_offset = kMapOffset;
  opts.input_scale = kMapScale;
  return nn::train(clf.net, examples, opts, on_epoch);
}

}  // namespace

std::vector<double> pretrain_backbone(Classifier& clf, std::span<const LabeledMap> samples,
                                      const FitRecipe& recipe) {
  if (clf.config.classes() < 4) raise(Errc::ConfigInvalid, "backbone pretraining needs at least four classes");
  clf.net.unfreeze_all();
  return fit(clf, samples, recipe, {});
}

Classifier transfer_backbone(const Classifier& backbone, const ClassifierConfig& config, std::uint64_t seed) {
  Classifier clf = build_classifier(config, seed);
  if (clf.conv_layers.size() != backbone.conv_layers.size()) raise(Errc::CheckpointMismatch, "backbone conv count");
  for (std::size_t i = 0; i < clf.conv_layers.size(); ++i) {
    auto& dst = clf.net.layer(clf.conv_layers[i]).params;
    const auto& src = backbone.net.layer(backbone.conv_layers[i]).params;
    for (std::size_t j = 0; j < dst.size(); ++j) {
      if (dst[j].shape() != src[j].shape()) raise(Errc::CheckpointMismatch, "backbone conv shape");
      dst[j] = src[j];
    }
  }
  apply_freeze_policy(clf);
  return clf;
}

std::vector<double> finetune(Classifier& clf, std::span<const LabeledMap> samples, const FitRecipe& recipe,
                             const nn::EpochCallback& on_epoch) {
  return fit(clf, samples, recipe, on_epoch);
}

Prediction predict(const Classifier& clf, const DepthMap& map) {
  const auto st = clf.net.forward(map_tensor(clf, map));
  Prediction p;
  p.scores = st.output().vec();
  p.ranked_classes.resize(p.scores.size());
  std::iota(p.ranked_classes.begin(), p.ranked_classes.end(), 0);
  std::stable_sort(p.ranked_classes.begin(), p.ranked_classes.end(), [&](int a, int b) {
    return p.scores[static_cast<std::size_t>(a)] > p.scores[static_cast<std::size_t>(b)];
  });
  return p;
}

double accuracy(const Classifier& clf, std::span<const LabeledMap> samples) {
  if (samples.empty()) raise(Errc::EmptyDataset, "no samples");
  std::vector<int> hit(samples.size(), 0);
  std::vector<std::exception_ptr> errors(samples.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      hit[i] = predict(clf, samples[i].map).ranked_classes.front() == samples[i].label;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return static_cast<double>(std::accumulate(hit.begin(), hit.end(), 0)) / static_cast<double>(samples.size());
}

}  // namespace fds::spoofclf
