#pragma once

#include <cstddef>
#include <vector>

namespace fds {

/// Single-channel float image, row-major.
struct Image {
  int h = 0;
  int w = 0;
  std::vector<float> px;

  Image() = default;
  Image(int h_, int w_, float fill = 0.0f);
  Image(int h_, int w_, std::vector<float> data);

  float& at(int y, int x) { return px[static_cast<std::size_t>(y) * w + x]; }
  float at(int y, int x) const { return px[static_cast<std::size_t>(y) * w + x]; }
  std::size_t size() const { return px.size(); }

  /// Edge-clamped lookup.
  float clamped(int y, int x) const;

  /// Bilinear sample at fractional (y, x) with edge clamp. Written in lerp
  /// form so a constant image samples back to the exact constant.
  float bilinear(float y, float x) const;

  bool operator==(const Image&) const = default;
};

/// Normalized depth image: 0 = farthest plane, 1 = nearest plane.
class DepthMap {
 public:
  DepthMap() = default;
  /// Throws NonFiniteSample / SampleOutOfRange / SizeMismatch on bad input.
  DepthMap(int h, int w, std::vector<float> values);
  explicit DepthMap(Image img);

  int h() const { return img_.h; }
  int w() const { return img_.w; }
  float at(int y, int x) const { return img_.at(y, x); }
  const std::vector<float>& values() const { return img_.px; }
  const Image& image() const { return img_; }

  bool operator==(const DepthMap&) const = default;

 private:
  Image img_;
};

std::vector<unsigned char> encode_depthmap(const DepthMap& d);
DepthMap decode_depthmap(const std::vector<unsigned char>& bytes);

double mean(const Image& img);
double variance(const Image& img);

}  // namespace fds
