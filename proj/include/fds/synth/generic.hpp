#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fds/core/image.hpp"

namespace fds::synth {

/// Shape categories of the generic (non-finger) pretraining corpus.
enum class GenericShape : std::uint8_t { Plane = 0, Ramp, Cylinder, Bumps, Ripples };
inline constexpr int kGenericShapeCount = 5;

std::string_view shape_name(GenericShape s);

struct GenericScene {
  Image image;  // shaded, textured luma
  DepthMap depth;
  GenericShape shape = GenericShape::Plane;
};

/// Random smooth surfaces rendered with the finger renderer's texture and
/// lighting model. Shapes cycle through the categories so the corpus is
/// balanced; everything else is drawn from `seed`.
std::vector<GenericScene> make_generic_scenes(int count, int h, int w, std::uint64_t seed);

}  // namespace fds::synth
