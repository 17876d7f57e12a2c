#pragma once

#include <span>
#include <vector>

#include "fds/core/image.hpp"
#include "fds/lf/lightfield.hpp"

namespace fds::lf {

struct RefocusStack {
  std::vector<float> alphas;  // strictly increasing
  std::vector<Image> slices;
};

/// Shift-and-sum refocus: mean over views of
/// luma(u, v, s + alpha*(u-u0), t + alpha*(v-v0)), bilinear with edge clamp.
Image refocus(const LightField& lf, float alpha);

RefocusStack refocus_stack(const LightField& lf, std::span<const float> alphas);

/// Per-pixel variance of the 3x3 Laplacian response over a window x window
/// neighbourhood. The Laplacian uses edge-clamped neighbours; the window is
/// truncated at the image border.
Image focus_measure(const Image& image, int window);

/// Depth from focus over a refocus stack. Per pixel the sharpest alpha wins
/// (smallest alpha on ties) and is mapped affinely onto [0,1].
DepthMap depth_from_focus(const LightField& lf, std::span<const float> alphas, int window);

/// `count` evenly spaced slopes over [lo, hi].
std::vector<float> linspace(float lo, float hi, int count);

}  // namespace fds::lf
