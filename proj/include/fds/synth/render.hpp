#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fds/core/image.hpp"
#include "fds/lf/lightfield.hpp"
#include "fds/synth/scene.hpp"

namespace fds::synth {

/// Procedural albedo: seeded band-limited noise, optionally darkened along
/// the knuckle crease lines of a finger.
class Texture {
 public:
  explicit Texture(std::uint64_t seed);
  /// Enables crease darkening for a finger of the given frame geometry.
  Texture& with_creases(int h, int w, double radius, int ridge_count);

  double albedo(double y, double x) const;

 private:
  struct Wave {
    double fy, fx, phase, amp;
  };
  std::vector<Wave> waves_;
  bool creases_ = false;
  int h_ = 0, w_ = 0;
  double radius_ = 1.0;
  int ridge_count_ = 1;
};

using HeightFn = std::function<double(double y, double x)>;

/// Lambertian appearance of a heightfield under a fixed top-left near light
/// (irradiance falls off with distance, so nearer surfaces render brighter),
/// sampled on an (h + 2*margin) x (w + 2*margin) grid. Pixel (i, j) of the
/// result corresponds to scene coordinate (i - margin, j - margin).
Image shade(const HeightFn& height, const Texture& tex, int h, int w, int margin);

/// Class-specific presentation artefacts applied to a shaded appearance:
/// contrast compression for prints, blur plus grain for scans, a faint pixel
/// grid for mobile screens. Real passes through unchanged.
Image apply_attack_appearance(Image appearance, AttackClass attack, std::uint64_t seed);

/// Separable Gaussian blur with edge clamp.
Image gaussian_blur(const Image& img, double sigma);

/// Builds the sub-aperture views by warping the centre appearance:
/// view(u,v)(s,t) = A(s - k*D(s,t)*(u-u0), t - k*D(s,t)*(v-v0)), with
/// k = kDisparityPerDepth, plus per-view Gaussian noise.
lf::LightField warp_views(const Image& appearance, int margin, const DepthMap& depth, int nu,
                          int nv, double noise_level, std::uint64_t noise_seed);

/// Margin needed so every warped lookup stays inside the appearance grid.
int warp_margin(int nu, int nv);

/// Full synthetic capture: light field plus its analytic depth map.
std::pair<lf::LightField, DepthMap> render_lightfield(const SceneSpec& spec, int nu, int nv, int ns,
                                                      int nt);

/// Centre-view appearance of a scene (no sensor noise), without margin.
Image render_center(const SceneSpec& spec, int h, int w);

}  // namespace fds::synth
