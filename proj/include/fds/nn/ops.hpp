#pragma once

#include <vector>

#include "fds/nn/tensor.hpp"

// Forward and backward kernels for every layer variant. Image tensors are
// [C, H, W]; vectors are [N]. Backward functions overwrite their outputs.
namespace fds::nn {

/// Cross-correlation (no kernel flip) with zero padding.
/// input [C,H,W], weights [O,C,KH,KW], bias [O]; stride in {1,2}.
/// Output [O, (H+2p-KH)/s+1, (W+2p-KW)/s+1].
Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias, int stride,
                      int pad);

/// Any of the gradient pointers may be null to skip that output.
void conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_out, int stride,
                     int pad, Tensor* grad_input, Tensor* grad_weights, Tensor* grad_bias);

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

Tensor clamp01_forward(const Tensor& x);
Tensor clamp01_backward(const Tensor& x, const Tensor& grad_out);

/// Nearest-neighbour 2x upsampling of [C,H,W].
Tensor upsample2x_forward(const Tensor& x);
Tensor upsample2x_backward(const Tensor& grad_out);

/// 2x2 max pooling, stride 2; `argmax` receives the flat input index chosen
/// for each output element (first maximum in row-major window order).
Tensor maxpool2x2_forward(const Tensor& x, std::vector<int>* argmax);
Tensor maxpool2x2_backward(const Shape& input_shape, const std::vector<int>& argmax,
                           const Tensor& grad_out);

/// Channel concatenation of [C1,H,W] and [C2,H,W].
Tensor concat_forward(const Tensor& a, const Tensor& b);
void concat_backward(const Tensor& grad_out, int channels_a, Tensor* grad_a, Tensor* grad_b);

/// y = W x + b with W [out, in].
Tensor dense_forward(const Tensor& x, const Tensor& weights, const Tensor& bias);
void dense_backward(const Tensor& x, const Tensor& weights, const Tensor& grad_out,
                    Tensor* grad_input, Tensor* grad_weights, Tensor* grad_bias);

Tensor softmax_forward(const Tensor& x);
/// Vector-Jacobian product through softmax given its output y.
Tensor softmax_backward(const Tensor& y, const Tensor& grad_out);

}  // namespace fds::nn
