// Shared oracles for the unit and acceptance suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fds/nn/network.hpp"
#include "fds/nn/tensor.hpp"

namespace fds::testing {

inline nn::Tensor random_tensor(const nn::Shape& shape, std::mt19937_64& rng, float lo = -1.0f,
                                float hi = 1.0f) {
  std::uniform_real_distribution<float> d(lo, hi);
  nn::Tensor t(shape);
  for (auto& v : t.vec()) v = d(rng);
  return t;
}

/// Small integers keep every partial sum exact in f32, so any summation
/// order gives bit-identical results.
inline nn::Tensor integer_tensor(const nn::Shape& shape, std::mt19937_64& rng, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  nn::Tensor t(shape);
  for (auto& v : t.vec()) v = static_cast<float>(d(rng));
  return t;
}

/// Direct-summation cross-correlation, zero padding.
inline nn::Tensor brute_conv(const nn::Tensor& x, const nn::Tensor& w, const nn::Tensor& b, int stride, int pad) {
  const int c = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int o = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int oh = (h + 2 * pad - kh) / stride + 1, ow = (wd + 2 * pad - kw) / stride + 1;
  nn::Tensor out({o, oh, ow});
  for (int f = 0; f < o; ++f)
    for (int i = 0; i < oh; ++i)
      for (int j = 0; j < ow; ++j) {
        float s = b[static_cast<std::size_t>(f)];
        for (int ch = 0; ch < c; ++ch)
          for (int di = 0; di < kh; ++di)
            for (int dj = 0; dj < kw; ++dj) {
              const int y = i * stride - pad + di, xx = j * stride - pad + dj;
              if (y < 0 || y >= h || xx < 0 || xx >= wd) continue;
              s += x[static_cast<std::size_t>((ch * h + y) * wd + xx)] *
                   w[static_cast<std::size_t>(((f * c + ch) * kh + di) * kw + dj)];
            }
        out[static_cast<std::size_t>((f * oh + i) * ow + j)] = s;
      }
  return out;
}

/// Norm-wise relative error between two gradient vectors.
inline double rel_err(const std::vector<double>& a, const std::vector<double>& n) {
  double diff = 0.0, na = 0.0, nn_ = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn_ += n[i] * n[i];
  }
  const double scale = std::max({std::sqrt(na), std::sqrt(nn_), 1e-6});
  return std::sqrt(diff) / scale;
}

/// Worst relative error over every parameter tensor and the input gradient,
/// comparing backward() with central differences of L = sum(w * output).
inline double gradient_check(nn::Network& net, nn::Tensor x, std::mt19937_64& rng, double eps = 1e-3) {
  const auto state = net.forward(x);
  const auto w = random_tensor(state.output().shape(), rng);
  auto loss = [&](const nn::Tensor& in) {
    const auto out = net.forward(in).output();
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += static_cast<double>(w[i]) * out[i];
    return s;
  };
  nn::Tensor gx;
  const auto grads = net.backward(state, w, -1, &gx);

  double worst = 0.0;
  auto check = [&](std::vector<float>& values, const nn::Tensor& analytic) {
    std::vector<double> a, n;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const float keep = values[i];
      values[i] = keep + static_cast<float>(eps);
      const double up = loss(x);
      values[i] = keep - static_cast<float>(eps);
      const double down = loss(x);
      values[i] = keep;
      n.push_back((up - down) / (2.0 * eps));
      a.push_back(analytic[i]);
    }
    worst = std::max(worst, rel_err(a, n));
  };
  for (int id = 0; id < net.size(); ++id) {
    auto& params = net.layer(id).params;
    for (std::size_t p = 0; p < params.size(); ++p)
      check(params[p].vec(), grads.per_layer[static_cast<std::size_t>(id)][p]);
  }
  check(x.vec(), gx);
  return worst;
}

/// Keeps values at least `gap` away from each listed kink.
inline void avoid_kinks(nn::Tensor& t, std::initializer_list<float> kinks, float gap = 0.02f) {
  for (auto& v : t.vec())
    for (float k : kinks)
      if (std::abs(v - k) < gap) v = k + (v >= k ? gap : -gap);
}

/// One gradient-check case per layer variant.
struct GradCase {
  const char* name;
  std::function<double(std::mt19937_64&)> run;
};

inline std::vector<GradCase> gradient_cases() {
  using nn::LayerKind;
  using nn::LayerSpec;
  using nn::Network;
  std::vector<GradCase> cases;
  for (int k : {1, 3, 5})
    for (int stride : {1, 2}) {
      static const char* names[] = {"Conv2D k1 s1", "Conv2D k1 s2", "Conv2D k3 s1",
                                    "Conv2D k3 s2", "Conv2D k5 s1", "Conv2D k5 s2"};
      cases.push_back({names[(k / 2) * 2 + (stride - 1)], [k, stride](std::mt19937_64& rng) {
                         Network net({2, 8, 8});
                         net.add(LayerSpec::conv2d(k, 2, 3, stride));
                         net.init_params(rng());
                         for (auto& v : net.layer(0).params[1].vec()) v = std::uniform_real_distribution<float>(-0.5f, 0.5f)(rng);
                         return gradient_check(net, random_tensor({2, 8, 8}, rng), rng);
                       }});
    }
  cases.push_back({"ReLU", [](std::mt19937_64& rng) {
                     Network net({3, 8, 8});
                     net.add(LayerSpec::simple(LayerKind::ReLU));
                     auto x = random_tensor({3, 8, 8}, rng);
                     avoid_kinks(x, {0.0f});
                     return gradient_check(net, x, rng);
                   }});
  cases.push_back({"Clamp01", [](std::mt19937_64& rng) {
                     Network net({2, 8, 8});
                     net.add(LayerSpec::simple(LayerKind::Clamp01));
                     auto x = random_tensor({2, 8, 8}, rng, -0.5f, 1.5f);
                     avoid_kinks(x, {0.0f, 1.0f});
                     return gradient_check(net, x, rng);
                   }});
  cases.push_back({"Upsample2x", [](std::mt19937_64& rng) {
                     Network net({2, 4, 4});
                     net.add(LayerSpec::simple(LayerKind::Upsample2x));
                     return gradient_check(net, random_tensor({2, 4, 4}, rng), rng);
                   }});
  cases.push_back({"MaxPool2x2", [](std::mt19937_64& rng) {
                     // distinct values spaced well beyond eps so no window changes its argmax
                     Network net({2, 8, 8});
                     net.add(LayerSpec::simple(LayerKind::MaxPool2x2));
                     nn::Tensor x({2, 8, 8});
                     std::vector<int> perm(x.size());
                     for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
                     std::shuffle(perm.begin(), perm.end(), rng);
                     for (std::size_t i = 0; i < perm.size(); ++i) x[i] = 0.05f * static_cast<float>(perm[i]) - 3.0f;
                     return gradient_check(net, x, rng);
                   }});
  cases.push_back({"Concat", [](std::mt19937_64& rng) {
                     Network net({2, 8, 8});
                     net.add(LayerSpec::conv2d(3, 2, 3));
                     net.add(LayerSpec::concat(nn::kNetworkInput));
                     net.init_params(rng());
                     return gradient_check(net, random_tensor({2, 8, 8}, rng), rng);
                   }});
  cases.push_back({"Flatten", [](std::mt19937_64& rng) {
                     Network net({2, 3, 3});
                     net.add(LayerSpec::simple(LayerKind::Flatten));
                     net.add(LayerSpec::dense(18, 4));
                     net.init_params(rng());
                     return gradient_check(net, random_tensor({2, 3, 3}, rng), rng);
                   }});
  cases.push_back({"Dense", [](std::mt19937_64& rng) {
                     Network net({12});
                     net.add(LayerSpec::dense(12, 5));
                     net.init_params(rng());
                     for (auto& v : net.layer(0).params[1].vec()) v = std::uniform_real_distribution<float>(-0.5f, 0.5f)(rng);
                     return gradient_check(net, random_tensor({12}, rng), rng);
                   }});
  cases.push_back({"Softmax", [](std::mt19937_64& rng) {
                     Network net({6});
                     net.add(LayerSpec::simple(LayerKind::Softmax));
                     return gradient_check(net, random_tensor({6}, rng, -2.0f, 2.0f), rng);
                   }});
  return cases;
}

}  // namespace fds::testing
