#include "fds/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fds/core/error.hpp"

namespace fds::synth {

std::string_view class_name(AttackClass c) {
  switch (c) {
    case AttackClass::Real: return "Real";
    case AttackClass::Print: return "Print";
    case AttackClass::WrappedPrint: return "WrappedPrint";
    case AttackClass::Scan: return "Scan";
    case AttackClass::Mobile: return "Mobile";
  }
  return "Unknown";
}

AttackClass parse_class(std::string_view name) {
  for (auto c : kAllClasses)
    if (class_name(c) == name) return c;
  raise(Errc::InvalidArgument, "unknown class name '" + std::string(name) + "'");
}

void SceneSpec::validate() const {
  if (!(base_radius > 0.0 && base_radius <= 1.0)) raise(Errc::InvalidArgument, "base_radius must be in (0,1]");
  if (ridge_count < 1) raise(Errc::InvalidArgument, "ridge_count must be >= 1");
  if (!(ridge_amplitude >= 0.0 && ridge_amplitude <= 0.5)) {
    raise(Errc::InvalidArgument, "ridge_amplitude must be in [0,0.5]");
  }
  if (!(noise_level >= 0.0 && noise_level <= 0.1)) raise(Errc::InvalidArgument, "noise_level must be in [0,0.1]");
}

double cylinder_profile(double xn, double radius) {
  const double q = radius * radius - xn * xn;
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double ridge_profile(double yn, double xn, double radius, int ridge_count) {
  const double across = cylinder_profile(xn, radius) / radius;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * ridge_count * yn)) * across;
}

double height_at(const SceneSpec& spec, double y, double x, int h, int w) {
  const double yn = (y + 0.5) / h;
  const double xn = 2.0 * (x + 0.5) / w - 1.0;
  switch (spec.attack) {
    case AttackClass::Real:
      return kCylinderHeight * cylinder_profile(xn, spec.base_radius) +
             spec.ridge_amplitude * ridge_profile(yn, xn, spec.base_radius, spec.ridge_count);
    case AttackClass::WrappedPrint:
      return kCylinderHeight * cylinder_profile(xn, spec.base_radius);
    case AttackClass::Print: return kPrintPlaneDepth;
    case AttackClass::Scan: return kScanPlaneDepth;
    case AttackClass::Mobile: return kMobilePlaneDepth;
  }
  return 0.0;
}

DepthMap heightfield(const SceneSpec& spec, int h, int w) {
  if (h < 16 || w < 16) raise(Errc::DimsTooSmall, "heightfield needs h, w >= 16");
  spec.validate();
  Image img(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(y, x) = static_cast<float>(std::clamp(height_at(spec, y, x, h, w), 0.0, 1.0));
    }
  return DepthMap(std::move(img));
}

}  // namespace fds::synth
