#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "fds/core/image.hpp"

namespace fds::synth {

enum class AttackClass : std::uint8_t { Real = 0, Print = 1, WrappedPrint = 2, Scan = 3, Mobile = 4 };

inline constexpr std::array<AttackClass, 5> kAllClasses = {
    AttackClass::Real, AttackClass::Print, AttackClass::WrappedPrint, AttackClass::Scan,
    AttackClass::Mobile};
inline constexpr int kClassCount = 5;

std::string_view class_name(AttackClass c);
/// Inverse of class_name; throws InvalidArgument on unknown names.
AttackClass parse_class(std::string_view name);
constexpr bool is_spoof(AttackClass c) { return c != AttackClass::Real; }
constexpr int class_index(AttackClass c) { return static_cast<int>(c); }

// Scene geometry constants (normalized depth units unless stated).
inline constexpr float kDisparityPerDepth = 1.5f;  // px per unit depth per angular step
inline constexpr double kCylinderHeight = 0.2;
inline constexpr double kPrintPlaneDepth = 0.0;   // reference plane, zero disparity
inline constexpr double kScanPlaneDepth = 0.5;
inline constexpr double kMobilePlaneDepth = 1.0;

struct SceneSpec {
  int subject_id = 0;
  AttackClass attack = AttackClass::Real;
  double base_radius = 1.0;      // (0,1], fraction of the half-width
  int ridge_count = 3;           // >= 1
  double ridge_amplitude = 0.3;  // [0, 0.5]
  std::uint64_t texture_seed = 0;
  double noise_level = 0.0;      // [0, 0.1]

  /// Throws InvalidArgument when a field is outside its documented range.
  void validate() const;
};

struct LabeledSample {
  Image image;  // center view luma
  DepthMap depth_gt;
  AttackClass label = AttackClass::Real;
  int subject_id = 0;
};

/// Finger cylinder profile at column position xn in (-1,1).
double cylinder_profile(double xn, double radius);
/// Knuckle ridge term (before amplitude), zero on the crease lines.
double ridge_profile(double yn, double xn, double radius, int ridge_count);

/// Continuous heightfield at pixel-centre coordinates (y, x) of an h x w
/// frame; coordinates outside the frame extend the analytic surface.
double height_at(const SceneSpec& spec, double y, double x, int h, int w);

/// Analytic ground-truth depth. Real: cylinder plus ridges; WrappedPrint:
/// the same cylinder without ridges; Print/Scan/Mobile: constant planes.
DepthMap heightfield(const SceneSpec& spec, int h, int w);

}  // namespace fds::synth
