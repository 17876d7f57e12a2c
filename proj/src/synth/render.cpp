#include "fds/synth/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fds/core/error.hpp"

namespace fds::synth {

namespace {

constexpr int kWaveCount = 10;
constexpr double kReliefPx = 10.0;  // height in pixels of one unit of depth
constexpr double kAmbient = 0.25;
// Near light: the source sits this many depth units in front of the
// reference plane, so irradiance falls off with the inverse square of
// (kLightDistance - depth). Unit gain at mid depth 0.5.
constexpr double kLightDistance = 6.0;
constexpr double kCreaseDepth = 0.3;
constexpr double kCreaseSigmaPx = 1.2;

constexpr double kPrintContrast = 0.85;
constexpr double kScanBlurSigma = 1.0;
constexpr double kScanGrain = 0.015;
constexpr double kMobileGridAmp = 0.03;
constexpr double kMobileGridPeriodPx = 4.0;

struct Light {
  double x, y, z;
};

// upper-left light; shading divides by |L|
constexpr Light kLight{-0.4, -0.5, 1.0};

}  // namespace

Texture::Texture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wavelength(4.0, 12.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  for (int i = 0; i < kWaveCount; ++i) {
    const double f = 1.0 / wavelength(rng);
    const double th = angle(rng);
    waves_.push_back({f * std::sin(th), f * std::cos(th), angle(rng), amp(rng)});
  }
}

Texture& Texture::with_creases(int h, int w, double radius, int ridge_count) {
  creases_ = true;
  h_ = h;
  w_ = w;
  radius_ = radius;
  ridge_count_ = ridge_count;
  return *this;
}

double Texture::albedo(double y, double x) const {
  double n = 0.0, norm = 0.0;
  for (const auto& wv : waves_) {
    n += wv.amp * std::cos(2.0 * std::numbers::pi * (wv.fy * y + wv.fx * x) + wv.phase);
    norm += wv.amp * wv.amp;
  }
  n /= std::sqrt(2.0 * norm);  // roughly unit variance
  double a = 0.55 + 0.18 * n;
  if (creases_) {
    const double xn = 2.0 * (x + 0.5) / w_ - 1.0;
    if (std::abs(xn) < radius_) {
      // crease lines sit where the ridge profile vanishes: yn = m / ridge_count
      const double period = static_cast<double>(h_) / ridge_count_;
      const double pos = (y + 0.5) / period;
      const double dist = std::abs(pos - std::round(pos)) * period;
      a -= kCreaseDepth * std::exp(-dist * dist / (2.0 * kCreaseSigmaPx * kCreaseSigmaPx));
    }
  }
  return std::clamp(a, 0.05, 0.95);
}

Image shade(const HeightFn& height, const Texture& tex, int h, int w, int margin) {
  const Light l = kLight;
  const double lnorm = std::sqrt(l.x * l.x + l.y * l.y + l.z * l.z);
  Image out(h + 2 * margin, w + 2 * margin);
  for (int i = 0; i < out.h; ++i) {
    for (int j = 0; j < out.w; ++j) {
      const double y = i - margin, x = j - margin;
      const double zx = kReliefPx * (height(y, x + 0.5) - height(y, x - 0.5));
      const double zy = kReliefPx * (height(y + 0.5, x) - height(y - 0.5, x));
      const double nn = std::sqrt(zx * zx + zy * zy + 1.0);
      const double ndotl = (-zx * l.x - zy * l.y + l.z) / (nn * lnorm);
      const double r = (kLightDistance - 0.5) / (kLightDistance - height(y, x));
      const double s = (kAmbient + (1.0 - kAmbient) * std::max(0.0, ndotl)) * r * r;
      out.at(i, j) = static_cast<float>(std::clamp(tex.albedo(y, x) * s, 0.0, 1.0));
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double ksum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
    ksum += k[static_cast<std::size_t>(i + r)];
  }
  for (auto& v : k) v /= ksum;
  Image tmp(img.h, img.w), out(img.h, img.w);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * img.clamped(y, x + i);
      tmp.at(y, x) = static_cast<float>(s);
    }
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * tmp.clamped(y + i, x);
      out.at(y, x) = static_cast<float>(s);
    }
  return out;
}

Image apply_attack_appearance(Image a, AttackClass attack, std::uint64_t seed) {
  switch (attack) {
    case AttackClass::Real:
      return a;
    case AttackClass::Print:
    case AttackClass::WrappedPrint:
      for (auto& v : a.px) v = static_cast<float>(0.5 + kPrintContrast * (v - 0.5));
      return a;
    case AttackClass::Scan: {
      a = gaussian_blur(a, kScanBlurSigma);
      std::mt19937_64 rng(seed ^ 0x5ca9'5ca9'5ca9'5ca9ULL);
      std::normal_distribution<double> grain(0.0, kScanGrain);
      for (auto& v : a.px) v = static_cast<float>(std::clamp(v + grain(rng), 0.0, 1.0));
      return a;
    }
    case AttackClass::Mobile:
      for (int y = 0; y < a.h; ++y)
        for (int x = 0; x < a.w; ++x) {
          const double g = 0.5 * (std::cos(2.0 * std::numbers::pi * x / kMobileGridPeriodPx) +
                                  std::cos(2.0 * std::numbers::pi * y / kMobileGridPeriodPx));
          a.at(y, x) = static_cast<float>(std::clamp(a.at(y, x) + kMobileGridAmp * g, 0.0, 1.0));
        }
      return a;
  }
  return a;
}

int warp_margin(int nu, int nv) {
  return static_cast<int>(std::ceil(kDisparityPerDepth * std::max(nu / 2, nv / 2))) + 2;
}

lf::LightField warp_views(const Image& appearance, int margin, const DepthMap& depth, int nu,
                          int nv, double noise_level, std::uint64_t noise_seed) {
  const int ns = depth.h(), nt = depth.w();
  if (appearance.h != ns + 2 * margin || appearance.w != nt + 2 * margin) {
    raise(Errc::ShapeMismatch, "appearance grid does not match depth map plus margin");
  }
  const lf::LfDims dims{nu, nv, ns, nt, 1};
  std::vector<float> samples(dims.count());
  const int u0 = nu / 2, v0 = nv / 2;
  std::size_t idx = 0;
  for (int u = 0; u < nu; ++u) {
    for (int v = 0; v < nv; ++v) {
      std::mt19937_64 rng(noise_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(u * nv + v + 1));
      std::normal_distribution<double> noise(0.0, noise_level > 0.0 ? noise_level : 1.0);
      const float du = static_cast<float>(u - u0), dv = static_cast<float>(v - v0);
      for (int s = 0; s < ns; ++s) {
        for (int t = 0; t < nt; ++t) {
          const float shift = kDisparityPerDepth * depth.at(s, t);
          double val = appearance.bilinear(static_cast<float>(s + margin) - shift * du,
                                           static_cast<float>(t + margin) - shift * dv);
          if (noise_level > 0.0) val += noise(rng);
          samples[idx++] = static_cast<float>(std::clamp(val, 0.0, 1.0));
        }
      }
    }
  }
  return lf::LightField(dims, lf::ChannelLayout::LumaOnly, std::move(samples));
}

namespace {

// sensor noise is independent per class even when captures share a texture
std::uint64_t noise_seed(const SceneSpec& spec) {
  return spec.texture_seed ^ (0xa5a5'0000'0000'5a5aULL * (static_cast<std::uint64_t>(spec.attack) + 1));
}

Image scene_appearance(const SceneSpec& spec, int h, int w, int margin) {
  Texture tex(spec.texture_seed);
  tex.with_creases(h, w, spec.base_radius, spec.ridge_count);
  const HeightFn height = [&](double y, double x) { return height_at(spec, y, x, h, w); };
  return apply_attack_appearance(shade(height, tex, h, w, margin), spec.attack, spec.texture_seed);
}

}  // namespace

std::pair<lf::LightField, DepthMap> render_lightfield(const SceneSpec& spec, int nu, int nv, int ns,
                                                      int nt) {
  if (ns < 16 || nt < 16) raise(Errc::DimsTooSmall, "render needs ns, nt >= 16");
  if (nu < 1 || nv < 1 || nu % 2 == 0 || nv % 2 == 0) raise(Errc::InvalidDims, "angular dims must be odd");
  spec.validate();
  DepthMap depth = heightfield(spec, ns, nt);
  const int margin = warp_margin(nu, nv);
  const Image a = scene_appearance(spec, ns, nt, margin);
  auto field = warp_views(a, margin, depth, nu, nv, spec.noise_level, noise_seed(spec));
  return {std::move(field), std::move(depth)};
}

Image render_center(const SceneSpec& spec, int h, int w) {
  if (h < 16 || w < 16) raise(Errc::DimsTooSmall, "render needs h, w >= 16");
  spec.validate();
  return scene_appearance(spec, h, w, 0);
}

}  // namespace fds::synth
