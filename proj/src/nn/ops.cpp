#include "fds/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fds/core/error.hpp"

namespace fds::nn {

namespace {

// C[M,N] += A[M,K] * B[K,N]
void gemm_nn(int m, int n, int k, const float* a, const float* b, float* c) {
  for (int i = 0; i < m; ++i) {
    float* crow = c + static_cast<std::size_t>(i) * n;
    const float* arow = a + static_cast<std::size_t>(i) * k;
    int p = 0;
    for (; p + 4 <= k; p += 4) {
      const float a0 = arow[p], a1 = arow[p + 1], a2 = arow[p + 2], a3 = arow[p + 3];
      const float* b0 = b + static_cast<std::size_t>(p) * n;
      const float* b1 = b0 + n;
      const float* b2 = b1 + n;
      const float* b3 = b2 + n;
      for (int j = 0; j < n; ++j) crow[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
    }
    for (; p < k; ++p) {
      const float a0 = arow[p];
      const float* b0 = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += a0 * b0[j];
    }
  }
}

// C[K,N] += A[M,K]^T * B[M,N]
void gemm_tn(int m, int n, int k, const float* a, const float* b, float* c) {
  for (int r = 0; r < k; ++r) {
    float* crow = c + static_cast<std::size_t>(r) * n;
    int i = 0;
    for (; i + 4 <= m; i += 4) {
      const float a0 = a[static_cast<std::size_t>(i) * k + r];
      const float a1 = a[static_cast<std::size_t>(i + 1) * k + r];
      const float a2 = a[static_cast<std::size_t>(i + 2) * k + r];
      const float a3 = a[static_cast<std::size_t>(i + 3) * k + r];
      const float* b0 = b + static_cast<std::size_t>(i) * n;
      const float* b1 = b0 + n;
      const float* b2 = b1 + n;
      const float* b3 = b2 + n;
      for (int j = 0; j < n; ++j) crow[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
    }
    for (; i < m; ++i) {
      const float a0 = a[static_cast<std::size_t>(i) * k + r];
      const float* b0 = b + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += a0 * b0[j];
    }
  }
}

// Lane-parallel dot product; fixed 16-lane split keeps the result
// independent of how the compiler vectorises it.
float dot(const float* x, const float* y, int n) {
  float acc[16] = {};
  int i = 0;
  for (; i + 16 <= n; i += 16)
    for (int l = 0; l < 16; ++l) acc[l] += x[i + l] * y[i + l];
  float s = 0.0f;
  for (; i < n; ++i) s += x[i] * y[i];
  for (int l = 0; l < 16; ++l) s += acc[l];
  return s;
}

// C[M,K] += A[M,N] * B[K,N]^T
void gemm_nt(int m, int n, int k, const float* a, const float* b, float* c) {
  for (int i = 0; i < m; ++i)
    for (int r = 0; r < k; ++r)
      c[static_cast<std::size_t>(i) * k + r] +=
          dot(a + static_cast<std::size_t>(i) * n, b + static_cast<std::size_t>(r) * n, n);
}

struct ConvGeom {
  int c, h, w, o, kh, kw, stride, pad, ho, wo;
  int kdim() const { return c * kh * kw; }
  int pix() const { return ho * wo; }
  bool pointwise() const { return kh == 1 && kw == 1 && stride == 1 && pad == 0; }
};

ConvGeom conv_geom(const Tensor& input, const Tensor& weights, int stride, int pad) {
  if (input.rank() != 3 || weights.rank() != 4) raise(Errc::ShapeMismatch, "conv2d expects [C,H,W] input and [O,C,KH,KW] weights");
  if (weights.dim(1) != input.dim(0)) {
    raise(Errc::ShapeMismatch, "conv2d weights " + shape_str(weights.shape()) + " vs input " +
                                   shape_str(input.shape()));
  }
  if (stride != 1 && stride != 2) raise(Errc::ShapeMismatch, "conv2d stride must be 1 or 2");
  if (pad < 0) raise(Errc::ShapeMismatch, "conv2d padding must be non-negative");
  ConvGeom g{input.dim(0), input.dim(1), input.dim(2), weights.dim(0), weights.dim(2),
             weights.dim(3), stride, pad, 0, 0};
  g.ho = (g.h + 2 * pad - g.kh) / stride + 1;
  g.wo = (g.w + 2 * pad - g.kw) / stride + 1;
  if (g.ho <= 0 || g.wo <= 0) raise(Errc::ShapeMismatch, "conv2d kernel larger than padded input");
  return g;
}

void im2col(const ConvGeom& g, const float* in, float* col) {
  for (int c = 0; c < g.c; ++c)
    for (int ky = 0; ky < g.kh; ++ky)
      for (int kx = 0; kx < g.kw; ++kx) {
        float* row = col + static_cast<std::size_t>((c * g.kh + ky) * g.kw + kx) * g.pix();
        const float* plane = in + static_cast<std::size_t>(c) * g.h * g.w;
        for (int oy = 0; oy < g.ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          float* dst = row + static_cast<std::size_t>(oy) * g.wo;
          if (iy < 0 || iy >= g.h) {
            std::fill(dst, dst + g.wo, 0.0f);
            continue;
          }
          const float* src = plane + static_cast<std::size_t>(iy) * g.w;
          for (int ox = 0; ox < g.wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            dst[ox] = (ix >= 0 && ix < g.w) ? src[ix] : 0.0f;
          }
        }
      }
}

void col2im(const ConvGeom& g, const float* col, float* in) {
  for (int c = 0; c < g.c; ++c)
    for (int ky = 0; ky < g.kh; ++ky)
      for (int kx = 0; kx < g.kw; ++kx) {
        const float* row = col + static_cast<std::size_t>((c * g.kh + ky) * g.kw + kx) * g.pix();
        float* plane = in + static_cast<std::size_t>(c) * g.h * g.w;
        for (int oy = 0; oy < g.ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.h) continue;
          const float* srcrow = row + static_cast<std::size_t>(oy) * g.wo;
          float* dst = plane + static_cast<std::size_t>(iy) * g.w;
          for (int ox = 0; ox < g.wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < g.w) dst[ix] += srcrow[ox];
          }
        }
      }
}

void require_rank3(const Tensor& x, const char* what) {
  if (x.rank() != 3) raise(Errc::ShapeMismatch, std::string(what) + " expects [C,H,W], got " + shape_str(x.shape()));
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, int stride,
                      int pad) {
  const ConvGeom g = conv_geom(input, weights, stride, pad);
  if (bias.size() != static_cast<std::size_t>(g.o)) raise(Errc::ShapeMismatch, "conv2d bias length");
  Tensor out({g.o, g.ho, g.wo});
  for (int o = 0; o < g.o; ++o) {
    std::fill(out.data() + static_cast<std::size_t>(o) * g.pix(),
              out.data() + static_cast<std::size_t>(o + 1) * g.pix(), bias[static_cast<std::size_t>(o)]);
  }
  if (g.pointwise()) {
    gemm_nn(g.o, g.pix(), g.kdim(), weights.data(), input.data(), out.data());
  } else {
    std::vector<float> col(static_cast<std::size_t>(g.kdim()) * g.pix());
    im2col(g, input.data(), col.data());
    gemm_nn(g.o, g.pix(), g.kdim(), weights.data(), col.data(), out.data());
  }
  return out;
}

void conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_out, int stride,
                     int pad, Tensor* grad_input, Tensor* grad_weights, Tensor* grad_bias) {
  const ConvGeom g = conv_geom(input, weights, stride, pad);
  if (grad_out.shape() != Shape{g.o, g.ho, g.wo}) {
    raise(Errc::ShapeMismatch, "conv2d grad_out " + shape_str(grad_out.shape()));
  }
  if (grad_bias) {
    *grad_bias = Tensor({g.o});
    for (int o = 0; o < g.o; ++o) {
      const float* row = grad_out.data() + static_cast<std::size_t>(o) * g.pix();
      double s = 0.0;
      for (int p = 0; p < g.pix(); ++p) s += row[p];
      (*grad_bias)[static_cast<std::size_t>(o)] = static_cast<float>(s);
    }
  }
  std::vector<float> col;
  const float* colp = input.data();
  if (grad_weights && !g.pointwise()) {
    col.resize(static_cast<std::size_t>(g.kdim()) * g.pix());
    im2col(g, input.data(), col.data());
    colp = col.data();
  }
  if (grad_weights) {
    *grad_weights = Tensor(weights.shape());
    gemm_nt(g.o, g.pix(), g.kdim(), grad_out.data(), colp, grad_weights->data());
  }
  if (grad_input) {
    *grad_input = Tensor(input.shape());
    if (g.pointwise()) {
      gemm_tn(g.o, g.pix(), g.kdim(), weights.data(), grad_out.data(), grad_input->data());
    } else {
      std::vector<float> gcol(static_cast<std::size_t>(g.kdim()) * g.pix(), 0.0f);
      gemm_tn(g.o, g.pix(), g.kdim(), weights.data(), grad_out.data(), gcol.data());
      col2im(g, gcol.data(), grad_input->data());
    }
  }
}

Tensor relu_forward(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.vec()) v = v > 0.0f ? v : 0.0f;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(x[i] > 0.0f)) g[i] = 0.0f;
  return g;
}

Tensor clamp01_forward(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.vec()) v = std::clamp(v, 0.0f, 1.0f);
  return y;
}

Tensor clamp01_backward(const Tensor& x, const Tensor& grad_out) {
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(x[i] > 0.0f && x[i] < 1.0f)) g[i] = 0.0f;
  return g;
}

Tensor upsample2x_forward(const Tensor& x) {
  require_rank3(x, "upsample2x");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Tensor y({c, 2 * h, 2 * w});
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < 2 * h; ++i) {
      const float* src = x.data() + (static_cast<std::size_t>(ch) * h + i / 2) * w;
      float* dst = y.data() + (static_cast<std::size_t>(ch) * 2 * h + i) * 2 * w;
      for (int j = 0; j < 2 * w; ++j) dst[j] = src[j / 2];
    }
  return y;
}

Tensor upsample2x_backward(const Tensor& grad_out) {
  require_rank3(grad_out, "upsample2x");
  const int c = grad_out.dim(0), h = grad_out.dim(1) / 2, w = grad_out.dim(2) / 2;
  Tensor g({c, h, w});
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < 2 * h; ++i) {
      const float* src = grad_out.data() + (static_cast<std::size_t>(ch) * 2 * h + i) * 2 * w;
      float* dst = g.data() + (static_cast<std::size_t>(ch) * h + i / 2) * w;
      for (int j = 0; j < 2 * w; ++j) dst[j / 2] += src[j];
    }
  return g;
}

Tensor maxpool2x2_forward(const Tensor& x, std::vector<int>* argmax) {
  require_rank3(x, "maxpool2x2");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  if (h % 2 || w % 2) raise(Errc::ShapeMismatch, "maxpool2x2 needs even spatial dims");
  Tensor y({c, h / 2, w / 2});
  if (argmax) argmax->assign(y.size(), 0);
  std::size_t o = 0;
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < h / 2; ++i)
      for (int j = 0; j < w / 2; ++j, ++o) {
        int best = (ch * h + 2 * i) * w + 2 * j;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            const int idx = (ch * h + 2 * i + dy) * w + 2 * j + dx;
            if (x[static_cast<std::size_t>(idx)] > x[static_cast<std::size_t>(best)]) best = idx;
          }
        y[o] = x[static_cast<std::size_t>(best)];
        if (argmax) (*argmax)[o] = best;
      }
  return y;
}

Tensor maxpool2x2_backward(const Shape& input_shape, const std::vector<int>& argmax,
                           const Tensor& grad_out) {
  if (argmax.size() != grad_out.size()) raise(Errc::ShapeMismatch, "maxpool2x2 argmax size");
  Tensor g(input_shape);
  for (std::size_t o = 0; o < argmax.size(); ++o) g[static_cast<std::size_t>(argmax[o])] += grad_out[o];
  return g;
}

Tensor concat_forward(const Tensor& a, const Tensor& b) {
  require_rank3(a, "concat");
  require_rank3(b, "concat");
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    raise(Errc::ShapeMismatch, "concat spatial dims " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  Tensor y({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.vec().begin(), a.vec().end(), y.vec().begin());
  std::copy(b.vec().begin(), b.vec().end(), y.vec().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return y;
}

void concat_backward(const Tensor& grad_out, int channels_a, Tensor* grad_a, Tensor* grad_b) {
  require_rank3(grad_out, "concat");
  const int h = grad_out.dim(1), w = grad_out.dim(2);
  const std::size_t split = static_cast<std::size_t>(channels_a) * h * w;
  const auto& g = grad_out.vec();
  if (grad_a) *grad_a = Tensor({channels_a, h, w}, std::vector<float>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(split)));
  if (grad_b) {
    *grad_b = Tensor({grad_out.dim(0) - channels_a, h, w},
                     std::vector<float>(g.begin() + static_cast<std::ptrdiff_t>(split), g.end()));
  }
}

Tensor dense_forward(const Tensor& x, const Tensor& weights, const Tensor& bias) {
  if (x.rank() != 1 || weights.rank() != 2 || weights.dim(1) != x.dim(0) ||
      bias.size() != static_cast<std::size_t>(weights.dim(0))) {
    raise(Errc::ShapeMismatch, "dense weights " + shape_str(weights.shape()) + " vs input " + shape_str(x.shape()));
  }
  const int out = weights.dim(0), in = weights.dim(1);
  Tensor y({out});
  for (int o = 0; o < out; ++o) {
    y[static_cast<std::size_t>(o)] =
        bias[static_cast<std::size_t>(o)] + dot(weights.data() + static_cast<std::size_t>(o) * in, x.data(), in);
  }
  return y;
}

void dense_backward(const Tensor& x, const Tensor& weights, const Tensor& grad_out,
                    Tensor* grad_input, Tensor* grad_weights, Tensor* grad_bias) {
  const int out = weights.dim(0), in = weights.dim(1);
  if (grad_out.size() != static_cast<std::size_t>(out) || x.size() != static_cast<std::size_t>(in)) {
    raise(Errc::ShapeMismatch, "dense backward shapes");
  }
  if (grad_bias) *grad_bias = grad_out;
  if (grad_weights) {
    *grad_weights = Tensor(weights.shape());
    for (int o = 0; o < out; ++o) {
      const float go = grad_out[static_cast<std::size_t>(o)];
      float* row = grad_weights->data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) row[i] = go * x[static_cast<std::size_t>(i)];
    }
  }
  if (grad_input) {
    *grad_input = Tensor({in});
    gemm_tn(out, 1, in, weights.data(), grad_out.data(), grad_input->data());
  }
}

Tensor softmax_forward(const Tensor& x) {
  if (x.rank() != 1) raise(Errc::ShapeMismatch, "softmax expects a vector");
  Tensor y({x.dim(0)});
  const float mx = *std::max_element(x.vec().begin(), x.vec().end());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += std::exp(static_cast<double>(x[i]) - mx);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = static_cast<float>(std::exp(static_cast<double>(x[i]) - mx) / z);
  }
  return y;
}

Tensor softmax_backward(const Tensor& y, const Tensor& grad_out) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += static_cast<double>(y[i]) * grad_out[i];
  Tensor g({y.dim(0)});
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = static_cast<float>(y[i] * (grad_out[i] - s));
  return g;
}

}  // namespace fds::nn
