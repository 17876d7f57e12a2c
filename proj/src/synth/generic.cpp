#include "fds/synth/generic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fds/core/error.hpp"
#include "fds/synth/render.hpp"

namespace fds::synth {

std::string_view shape_name(GenericShape s) {
  switch (s) {
    case GenericShape::Plane: return "Plane";
    case GenericShape::Ramp: return "Ramp";
    case GenericShape::Cylinder: return "Cylinder";
    case GenericShape::Bumps: return "Bumps";
    case GenericShape::Ripples: return "Ripples";
  }
  return "Unknown";
}

namespace {

constexpr double kSensorNoise = 0.01;

HeightFn random_surface(GenericShape shape, int h, int w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double hh = h, ww = w;
  switch (shape) {
    case GenericShape::Plane: {
      const double level = unit(rng);
      return [level](double, double) { return level; };
    }
    case GenericShape::Ramp: {
      const double th = angle(rng), base = 0.2 + 0.6 * unit(rng), slope = 0.3 + 0.5 * unit(rng);
      return [=](double y, double x) {
        const double p = (std::cos(th) * (x / ww - 0.5) + std::sin(th) * (y / hh - 0.5));
        return std::clamp(base + slope * p, 0.0, 1.0);
      };
    }
    case GenericShape::Cylinder: {
      const double th = angle(rng), r = 0.2 + 0.3 * unit(rng), height = 0.3 + 0.6 * unit(rng);
      const double off = 0.3 * (unit(rng) - 0.5);
      return [=](double y, double x) {
        const double d = std::cos(th) * (x / ww - 0.5) + std::sin(th) * (y / hh - 0.5) - off;
        const double q = r * r - d * d;
        return q > 0.0 ? height * std::sqrt(q) / r : 0.0;
      };
    }
    case GenericShape::Bumps: {
      const int n = 1 + static_cast<int>(unit(rng) * 4.0);
      struct Bump {
        double cy, cx, s, a;
      };
      std::vector<Bump> bumps;
      for (int i = 0; i < n; ++i) {
        bumps.push_back({unit(rng), unit(rng), 0.08 + 0.15 * unit(rng), 0.3 + 0.6 * unit(rng)});
      }
      return [=](double y, double x) {
        double z = 0.0;
        for (const auto& b : bumps) {
          const double dy = y / hh - b.cy, dx = x / ww - b.cx;
          z += b.a * std::exp(-(dy * dy + dx * dx) / (2.0 * b.s * b.s));
        }
        return std::clamp(z, 0.0, 1.0);
      };
    }
    case GenericShape::Ripples: {
      const double th = angle(rng), cycles = 1.5 + 3.0 * unit(rng), amp = 0.15 + 0.3 * unit(rng);
      const double base = amp + (1.0 - 2.0 * amp) * unit(rng), ph = angle(rng);
      return [=](double y, double x) {
        const double p = std::cos(th) * x / ww + std::sin(th) * y / hh;
        return base + amp * std::sin(2.0 * std::numbers::pi * cycles * p + ph);
      };
    }
  }
  return [](double, double) { return 0.0; };
}

}  // namespace

std::vector<GenericScene> make_generic_scenes(int count, int h, int w, std::uint64_t seed) {
  if (count < 1) raise(Errc::InvalidArgument, "generic scene count must be positive");
  if (h < 16 || w < 16) raise(Errc::DimsTooSmall, "generic scenes need h, w >= 16");
  std::vector<GenericScene> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), 0x6e6e7269u};
    std::mt19937_64 rng(seq);
    const auto shape = static_cast<GenericShape>(i % kGenericShapeCount);
    const HeightFn height = random_surface(shape, h, w, rng);
    Image depth(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) depth.at(y, x) = static_cast<float>(std::clamp(height(y, x), 0.0, 1.0));
    Image img = shade(height, Texture(rng()), h, w, 0);
    std::normal_distribution<double> noise(0.0, kSensorNoise);
    for (auto& v : img.px) v = static_cast<float>(std::clamp(v + noise(rng), 0.0, 1.0));
    out.push_back({std::move(img), DepthMap(std::move(depth)), shape});
  }
  return out;
}

}  // namespace fds::synth
