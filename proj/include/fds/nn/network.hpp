#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fds/nn/tensor.hpp"

namespace fds::nn {

enum class LayerKind : std::uint8_t {
  Conv2D,
  ReLU,
  Upsample2x,
  Concat,
  Dense,
  Softmax,
  Flatten,
  MaxPool2x2,
  Clamp01,
};

std::string_view kind_name(LayerKind k);

/// Id used as a layer input/source to mean "the network input".
inline constexpr int kNetworkInput = -1;

struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  // Conv2D
  int kernel_h = 0, kernel_w = 0, in_ch = 0, out_ch = 0, stride = 1;
  int pad = -1;  // -1: same padding (kernel / 2)
  // Dense
  int in_dim = 0, out_dim = 0;
  // Concat: second input, an earlier layer id or kNetworkInput
  int concat_source = kNetworkInput;
  bool frozen = false;
  std::string name;

  static LayerSpec conv2d(int kernel, int in_ch, int out_ch, int stride = 1, std::string name = {});
  static LayerSpec dense(int in_dim, int out_dim, std::string name = {});
  static LayerSpec concat(int source, std::string name = {});
  static LayerSpec simple(LayerKind kind, std::string name = {});

  bool has_params() const { return kind == LayerKind::Conv2D || kind == LayerKind::Dense; }
};

struct Layer {
  LayerSpec spec;
  int input = kNetworkInput;
  Shape out_shape;
  std::vector<Tensor> params;  // {weights, bias} for Conv2D/Dense, empty otherwise
};

/// Activations of one forward pass; consumed by Network::backward.
struct ForwardState {
  Tensor input;
  std::vector<Tensor> outputs;
  std::vector<std::vector<int>> pool_argmax;

  bool valid() const { return !outputs.empty(); }
  const Tensor& output() const { return outputs.back(); }
};

/// Parameter gradients aligned with Network layers (empty for param-less
/// layers, zero-filled for frozen ones).
struct Gradients {
  std::vector<std::vector<Tensor>> per_layer;

  void add(const Gradients& other);
  void scale(float k);
  bool all_finite() const;
};

/// Called after each layer's output is computed; may modify it in place.
using ForwardHook = std::function<void(int layer, Tensor& output)>;

/// Declarative layer graph. Layers are appended in topological order; each
/// reads the previous layer's output unless an explicit input is given, and
/// Concat additionally reads an earlier layer. The last layer is the output.
class Network {
 public:
  explicit Network(Shape input_shape);

  /// Appends a layer reading the previous layer (or the network input for
  /// the first layer). Validates shapes; throws ShapeMismatch/ConfigInvalid.
  int add(LayerSpec spec);
  int add(LayerSpec spec, int input);

  int size() const { return static_cast<int>(layers_.size()); }
  const Layer& layer(int id) const { return layers_.at(static_cast<std::size_t>(id)); }
  Layer& layer(int id) { return layers_.at(static_cast<std::size_t>(id)); }
  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const { return layers_.back().out_shape; }
  /// Shape produced by a layer id or kNetworkInput.
  const Shape& shape_of(int id) const;
  /// Layer id by name; -2 when absent.
  int find(std::string_view name) const;

  /// He-normal weights (std = sqrt(2 / fan_in)) and zero biases.
  void init_params(std::uint64_t seed);
  /// Re-initializes a single layer's parameters.
  void init_layer(int id, std::uint64_t seed);

  void set_frozen(int id, bool frozen);
  void unfreeze_all();
  bool trainable(int id) const { return layer(id).spec.has_params() && !layer(id).spec.frozen; }
  std::size_t param_count() const;

  ForwardState forward(const Tensor& x, const ForwardHook& hook = {}) const;

  /// Reverse pass seeded with `grad` at the output of `from_layer` (default:
  /// the output layer); layers after `from_layer` are skipped. Frozen layers
  /// get zero parameter gradients but still pass input gradients upstream.
  /// When `grad_input` is non-null it receives d(loss)/d(input).
  Gradients backward(const ForwardState& state, const Tensor& grad, int from_layer = -1,
                     Tensor* grad_input = nullptr) const;

  Gradients zero_gradients() const;

 private:
  std::vector<Layer> layers_;
  Shape input_shape_;
};

}  // namespace fds::nn
