#include "fds/nn/network.hpp"

#include <cmath>
#include <random>

#include "fds/core/error.hpp"
#include "fds/nn/ops.hpp"

namespace fds::nn {

std::string_view kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::Conv2D: return "Conv2D";
    case LayerKind::ReLU: return "ReLU";
    case LayerKind::Upsample2x: return "Upsample2x";
    case LayerKind::Concat: return "Concat";
    case LayerKind::Dense: return "Dense";
    case LayerKind::Softmax: return "Softmax";
    case LayerKind::Flatten: return "Flatten";
    case LayerKind::MaxPool2x2: return "MaxPool2x2";
    case LayerKind::Clamp01: return "Clamp01";
  }
  return "Unknown";
}

LayerSpec LayerSpec::conv2d(int kernel, int in_ch, int out_ch, int stride, std::string name) {
  LayerSpec s;
  s.kind = LayerKind::Conv2D;
  s.kernel_h = s.kernel_w = kernel;
  s.in_ch = in_ch;
  s.out_ch = out_ch;
  s.stride = stride;
  s.name = std::move(name);
  return s;
}

LayerSpec LayerSpec::dense(int in_dim, int out_dim, std::string name) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.in_dim = in_dim;
  s.out_dim = out_dim;
  s.name = std::move(name);
  return s;
}

LayerSpec LayerSpec::concat(int source, std::string name) {
  LayerSpec s;
  s.kind = LayerKind::Concat;
  s.concat_source = source;
  s.name = std::move(name);
  return s;
}

LayerSpec LayerSpec::simple(LayerKind kind, std::string name) {
  LayerSpec s;
  s.kind = kind;
  s.name = std::move(name);
  return s;
}

void Gradients::add(const Gradients& other) {
  if (other.per_layer.size() != per_layer.size()) raise(Errc::ShapeMismatch, "gradient layer count");
  for (std::size_t i = 0; i < per_layer.size(); ++i) {
    if (other.per_layer[i].size() != per_layer[i].size()) raise(Errc::ShapeMismatch, "gradient tensor count");
    for (std::size_t j = 0; j < per_layer[i].size(); ++j) per_layer[i][j].add(other.per_layer[i][j]);
  }
}

void Gradients::scale(float k) {
  for (auto& l : per_layer)
    for (auto& t : l) t.scale(k);
}

bool Gradients::all_finite() const {
  for (const auto& l : per_layer)
    for (const auto& t : l)
      if (!t.all_finite()) return false;
  return true;
}

Network::Network(Shape input_shape) : input_shape_(std::move(input_shape)) {
  if (input_shape_.empty() || numel(input_shape_) == 0) raise(Errc::ConfigInvalid, "empty network input shape");
}

const Shape& Network::shape_of(int id) const {
  if (id == kNetworkInput) return input_shape_;
  return layer(id).out_shape;
}

int Network::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (layers_[static_cast<std::size_t>(i)].spec.name == name) return i;
  return -2;
}

int Network::add(LayerSpec spec) { return add(std::move(spec), size() - 1); }

int Network::add(LayerSpec spec, int input) {
  const int id = size();
  if (input < kNetworkInput || input >= id) raise(Errc::ConfigInvalid, "layer input must be an earlier layer");
  const Shape& in = shape_of(input);
  Layer l;
  l.input = input;
  auto need_rank3 = [&](const char* what) {
    if (in.size() != 3) raise(Errc::ShapeMismatch, std::string(what) + " needs a [C,H,W] input, got " + shape_str(in));
  };
  switch (spec.kind) {
    case LayerKind::Conv2D: {
      need_rank3("Conv2D");
      if (spec.kernel_h < 1 || spec.kernel_w < 1 || spec.out_ch < 1) raise(Errc::ConfigInvalid, "Conv2D geometry");
      if (spec.in_ch != in[0]) {
        raise(Errc::ShapeMismatch, "Conv2D in_ch " + std::to_string(spec.in_ch) + " vs input " + shape_str(in));
      }
      if (spec.stride != 1 && spec.stride != 2) raise(Errc::ConfigInvalid, "Conv2D stride must be 1 or 2");
      if (spec.pad < 0) {
        if (spec.kernel_h % 2 == 0 || spec.kernel_w % 2 == 0) raise(Errc::ConfigInvalid, "same padding needs odd kernels");
        spec.pad = spec.kernel_h / 2;
      }
      const int ho = (in[1] + 2 * spec.pad - spec.kernel_h) / spec.stride + 1;
      const int wo = (in[2] + 2 * spec.pad - spec.kernel_w) / spec.stride + 1;
      if (ho < 1 || wo < 1) raise(Errc::ShapeMismatch, "Conv2D output would be empty");
      l.out_shape = {spec.out_ch, ho, wo};
      l.params = {Tensor({spec.out_ch, spec.in_ch, spec.kernel_h, spec.kernel_w}), Tensor({spec.out_ch})};
      break;
    }
    case LayerKind::Dense:
      if (in.size() != 1 || in[0] != spec.in_dim) {
        raise(Errc::ShapeMismatch, "Dense in_dim " + std::to_string(spec.in_dim) + " vs input " + shape_str(in));
      }
      if (spec.out_dim < 1) raise(Errc::ConfigInvalid, "Dense out_dim");
      l.out_shape = {spec.out_dim};
      l.params = {Tensor({spec.out_dim, spec.in_dim}), Tensor({spec.out_dim})};
      break;
    case LayerKind::ReLU:
    case LayerKind::Clamp01:
      l.out_shape = in;
      break;
    case LayerKind::Upsample2x:
      need_rank3("Upsample2x");
      l.out_shape = {in[0], 2 * in[1], 2 * in[2]};
      break;
    case LayerKind::MaxPool2x2:
      need_rank3("MaxPool2x2");
      if (in[1] % 2 || in[2] % 2) raise(Errc::ShapeMismatch, "MaxPool2x2 needs even spatial dims, got " + shape_str(in));
      l.out_shape = {in[0], in[1] / 2, in[2] / 2};
      break;
    case LayerKind::Concat: {
      need_rank3("Concat");
      if (spec.concat_source < kNetworkInput || spec.concat_source >= id) {
        raise(Errc::ConfigInvalid, "Concat source must be an earlier layer");
      }
      const Shape& src = shape_of(spec.concat_source);
      if (src.size() != 3 || src[1] != in[1] || src[2] != in[2]) {
        raise(Errc::ShapeMismatch, "Concat source " + shape_str(src) + " vs input " + shape_str(in));
      }
      l.out_shape = {in[0] + src[0], in[1], in[2]};
      break;
    }
    case LayerKind::Flatten:
      l.out_shape = {static_cast<int>(numel(in))};
      break;
    case LayerKind::Softmax:
      if (in.size() != 1) raise(Errc::ShapeMismatch, "Softmax needs a vector input");
      l.out_shape = in;
      break;
  }
  l.spec = std::move(spec);
  layers_.push_back(std::move(l));
  return id;
}

void Network::init_layer(int id, std::uint64_t seed) {
  Layer& l = layer(id);
  if (!l.spec.has_params()) return;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  std::mt19937_64 rng(seq);
  const Tensor& w = l.params[0];
  const std::size_t fan_in = w.size() / static_cast<std::size_t>(w.dim(0));
  std::normal_distribution<float> dist(0.0f, std::sqrt(2.0f / static_cast<float>(fan_in)));
  for (auto& v : l.params[0].vec()) v = dist(rng);
  l.params[1].fill(0.0f);
}

void Network::init_params(std::uint64_t seed) {
  for (int i = 0; i < size(); ++i) init_layer(i, seed);
}

void Network::set_frozen(int id, bool frozen) { layer(id).spec.frozen = frozen; }

void Network::unfreeze_all() {
  for (auto& l : layers_) l.spec.frozen = false;
}

std::size_t Network::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_)
    for (const auto& p : l.params) n += p.size();
  return n;
}

ForwardState Network::forward(const Tensor& x, const ForwardHook& hook) const {
  if (x.shape() != input_shape_) {
    raise(Errc::ShapeMismatch, "network input " + shape_str(x.shape()) + ", expected " + shape_str(input_shape_));
  }
  ForwardState st;
  st.input = x;
  st.outputs.resize(layers_.size());
  st.pool_argmax.resize(layers_.size());
  auto value = [&](int id) -> const Tensor& { return id == kNetworkInput ? st.input : st.outputs[static_cast<std::size_t>(id)]; };
  for (int i = 0; i < size(); ++i) {
    const Layer& l = layers_[static_cast<std::size_t>(i)];
    const Tensor& in = value(l.input);
    Tensor out;
    switch (l.spec.kind) {
      case LayerKind::Conv2D: out = conv2d_forward(in, l.params[0], l.params[1], l.spec.stride, l.spec.pad); break;
      case LayerKind::ReLU: out = relu_forward(in); break;
      case LayerKind::Clamp01: out = clamp01_forward(in); break;
      case LayerKind::Upsample2x: out = upsample2x_forward(in); break;
      case LayerKind::MaxPool2x2: out = maxpool2x2_forward(in, &st.pool_argmax[static_cast<std::size_t>(i)]); break;
      case LayerKind::Concat: out = concat_forward(in, value(l.spec.concat_source)); break;
      case LayerKind::Dense: out = dense_forward(in, l.params[0], l.params[1]); break;
      case LayerKind::Flatten: out = in.reshaped({static_cast<int>(in.size())}); break;
      case LayerKind::Softmax: out = softmax_forward(in); break;
    }
    if (hook) hook(i, out);
    st.outputs[static_cast<std::size_t>(i)] = std::move(out);
  }
  return st;
}

Gradients Network::zero_gradients() const {
  Gradients g;
  g.per_layer.resize(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i)
    for (const auto& p : layers_[i].params) g.per_layer[i].emplace_back(p.shape());
  return g;
}

Gradients Network::backward(const ForwardState& st, const Tensor& grad, int from_layer,
                            Tensor* grad_input) const {
  if (!st.valid() || st.outputs.size() != layers_.size()) raise(Errc::NoForwardState, "backward without a matching forward pass");
  if (from_layer < 0) from_layer = size() - 1;
  if (from_layer >= size()) raise(Errc::InvalidArgument, "backward seed layer out of range");
  if (grad.shape() != layers_[static_cast<std::size_t>(from_layer)].out_shape) {
    raise(Errc::ShapeMismatch, "backward seed gradient " + shape_str(grad.shape()));
  }

  // needs[i]: the output of layer i leads back to something trainable
  // (or to the input, when its gradient was requested).
  const bool want_input = grad_input != nullptr;
  std::vector<char> needs(layers_.size(), 0);
  auto req = [&](int id) { return id == kNetworkInput ? want_input : needs[static_cast<std::size_t>(id)] != 0; };
  for (int i = 0; i <= from_layer; ++i) {
    const Layer& l = layers_[static_cast<std::size_t>(i)];
    bool r = trainable(i) || req(l.input);
    if (l.spec.kind == LayerKind::Concat) r = r || req(l.spec.concat_source);
    needs[static_cast<std::size_t>(i)] = r;
  }

  Gradients out = zero_gradients();
  std::vector<Tensor> gout(layers_.size());
  Tensor gin;
  gout[static_cast<std::size_t>(from_layer)] = grad;
  auto accumulate = [&](int id, Tensor&& g) {
    Tensor& slot = id == kNetworkInput ? gin : gout[static_cast<std::size_t>(id)];
    if (slot.empty()) slot = std::move(g);
    else slot.add(g);
  };
  auto value = [&](int id) -> const Tensor& { return id == kNetworkInput ? st.input : st.outputs[static_cast<std::size_t>(id)]; };

  for (int i = from_layer; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    const Layer& l = layers_[ui];
    if (gout[ui].empty()) continue;
    const Tensor& g = gout[ui];
    const Tensor& in = value(l.input);
    const bool pass = req(l.input);
    switch (l.spec.kind) {
      case LayerKind::Conv2D: {
        Tensor gi, gw, gb;
        const bool train = trainable(i);
        if (pass || train) {
          conv2d_backward(in, l.params[0], g, l.spec.stride, l.spec.pad, pass ? &gi : nullptr,
                          train ? &gw : nullptr, train ? &gb : nullptr);
        }
        if (train) {
          out.per_layer[ui][0] = std::move(gw);
          out.per_layer[ui][1] = std::move(gb);
        }
        if (pass) accumulate(l.input, std::move(gi));
        break;
      }
      case LayerKind::Dense: {
        Tensor gi, gw, gb;
        const bool train = trainable(i);
        dense_backward(in, l.params[0], g, pass ? &gi : nullptr, train ? &gw : nullptr, train ? &gb : nullptr);
        if (train) {
          out.per_layer[ui][0] = std::move(gw);
          out.per_layer[ui][1] = std::move(gb);
        }
        if (pass) accumulate(l.input, std::move(gi));
        break;
      }
      case LayerKind::ReLU:
        if (pass) accumulate(l.input, relu_backward(in, g));
        break;
      case LayerKind::Clamp01:
        if (pass) accumulate(l.input, clamp01_backward(in, g));
        break;
      case LayerKind::Upsample2x:
        if (pass) accumulate(l.input, upsample2x_backward(g));
        break;
      case LayerKind::MaxPool2x2:
        if (pass) accumulate(l.input, maxpool2x2_backward(in.shape(), st.pool_argmax[ui], g));
        break;
      case LayerKind::Flatten:
        if (pass) accumulate(l.input, g.reshaped(in.shape()));
        break;
      case LayerKind::Softmax:
        if (pass) accumulate(l.input, softmax_backward(st.outputs[ui], g));
        break;
      case LayerKind::Concat: {
        const bool pass_src = req(l.spec.concat_source);
        Tensor ga, gb;
        concat_backward(g, in.dim(0), pass ? &ga : nullptr, pass_src ? &gb : nullptr);
        if (pass) accumulate(l.input, std::move(ga));
        if (pass_src) accumulate(l.spec.concat_source, std::move(gb));
        break;
      }
    }
    gout[ui] = Tensor();  // release early
  }
  if (grad_input) *grad_input = gin.empty() ? Tensor(input_shape_) : std::move(gin);
  return out;
}

}  // namespace fds::nn
