#include "fds/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fds/core/bytes.hpp"
#include "fds/core/error.hpp"

namespace fds {

Image::Image(int h_, int w_, float fill)
    : h(h_), w(w_), px(static_cast<std::size_t>(h_) * static_cast<std::size_t>(w_), fill) {}

Image::Image(int h_, int w_, std::vector<float> data) : h(h_), w(w_), px(std::move(data)) {
  if (px.size() != static_cast<std::size_t>(h) * static_cast<std::size_t>(w)) {
    raise(Errc::SizeMismatch, "image data length does not match dims");
  }
}

float Image::clamped(int y, int x) const {
  y = std::clamp(y, 0, h - 1);
  x = std::clamp(x, 0, w - 1);
  return at(y, x);
}

float Image::bilinear(float y, float x) const {
  y = std::clamp(y, 0.0f, static_cast<float>(h - 1));
  x = std::clamp(x, 0.0f, static_cast<float>(w - 1));
  const int y0 = static_cast<int>(y);
  const int x0 = static_cast<int>(x);
  const int y1 = std::min(y0 + 1, h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const float fy = y - static_cast<float>(y0);
  const float fx = x - static_cast<float>(x0);
  const float p00 = at(y0, x0), p01 = at(y0, x1);
  const float p10 = at(y1, x0), p11 = at(y1, x1);
  const float top = p00 + fx * (p01 - p00);
  const float bot = p10 + fx * (p11 - p10);
  return top + fy * (bot - top);
}

DepthMap::DepthMap(int h, int w, std::vector<float> values) : DepthMap(Image(h, w, std::move(values))) {}

DepthMap::DepthMap(Image img) : img_(std::move(img)) {
  for (float v : img_.px) {
    if (!std::isfinite(v)) raise(Errc::NonFiniteSample, "depth value is not finite");
    if (v < 0.0f || v > 1.0f) raise(Errc::SampleOutOfRange, "depth value outside [0,1]");
  }
}

namespace {
constexpr std::string_view kDepthMagic = "DPTH";
constexpr std::uint8_t kDepthVersion = 1;
}  // namespace

std::vector<unsigned char> encode_depthmap(const DepthMap& d) {
  ByteWriter out;
  out.magic(kDepthMagic);
  out.u8(kDepthVersion);
  out.u16(static_cast<std::uint16_t>(d.h()));
  out.u16(static_cast<std::uint16_t>(d.w()));
  out.f32s(d.values());
  return out.take();
}

DepthMap decode_depthmap(const std::vector<unsigned char>& bytes) {
  ByteReader in(bytes);
  in.expect_magic(kDepthMagic);
  if (in.u8() != kDepthVersion) raise(Errc::VersionUnsupported, "DPTH version");
  const int h = in.u16();
  const int w = in.u16();
  const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  if (in.remaining() != n * 4) {
    raise(Errc::SizeMismatch, "DPTH payload holds " + std::to_string(in.remaining()) +
                                  " bytes, header declares " + std::to_string(n) + " floats");
  }
  return DepthMap(h, w, in.f32s(n));
}

double mean(const Image& img) {
  double s = 0.0;
  for (float v : img.px) s += v;
  return img.px.empty() ? 0.0 : s / static_cast<double>(img.px.size());
}

double variance(const Image& img) {
  if (img.px.empty()) return 0.0;
  const double m = mean(img);
  double s = 0.0;
  for (float v : img.px) s += (v - m) * (v - m);
  return s / static_cast<double>(img.px.size());
}

}  // namespace fds
