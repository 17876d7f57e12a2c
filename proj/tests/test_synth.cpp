#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "fds/core/error.hpp"
#include "fds/core/image.hpp"
#include "fds/lf/refocus.hpp"
#include "fds/synth/dataset.hpp"
#include "fds/synth/generic.hpp"
#include "fds/synth/render.hpp"

using namespace fds;
using namespace fds::synth;

namespace {

SceneSpec finger(AttackClass c, double noise = 0.0) {
  SceneSpec s;
  s.subject_id = 3;
  s.attack = c;
  s.base_radius = 0.8;
  s.ridge_count = 3;
  s.ridge_amplitude = 0.3;
  s.texture_seed = 77;
  s.noise_level = noise;
  return s;
}

double map_variance(const DepthMap& d) { return variance(d.image()); }

double pearson(const std::vector<float>& a, const std::vector<float>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("heightfields per class") {
  const int h = 32, w = 40;
  const auto real = heightfield(finger(AttackClass::Real), h, w);
  const auto wrapped = heightfield(finger(AttackClass::WrappedPrint), h, w);
  for (auto [c, depth] : {std::pair{AttackClass::Print, 0.0f}, {AttackClass::Scan, 0.5f}, {AttackClass::Mobile, 1.0f}}) {
    const auto map = heightfield(finger(c), h, w);
    for (float v : map.values()) CHECK(v == depth);
  }
  // the only difference between a finger and its wrapped print is the knuckle relief
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double yn = (y + 0.5) / h, xn = 2.0 * (x + 0.5) / w - 1.0, r = 0.8;
      const double across = xn * xn < r * r ? std::sqrt(r * r - xn * xn) / r : 0.0;
      const double relief = 0.3 * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * 3 * yn)) * across;
      CHECK(real.at(y, x) - wrapped.at(y, x) == doctest::Approx(relief).epsilon(1e-5));
    }
  CHECK_THROWS_AS(heightfield(finger(AttackClass::Real), 8, 32), Error);
  auto bad = finger(AttackClass::Real);
  bad.ridge_amplitude = 0.6;
  CHECK_THROWS_AS(heightfield(bad, 32, 32), Error);
}

TEST_CASE("depth variance separates the classes") {
  for (int subject = 0; subject < 6; ++subject) {
    std::map<AttackClass, double> var;
    for (auto c : kAllClasses) var[c] = map_variance(heightfield(capture_scene(5, subject, 0, c, 0.0), 64, 64));
    CHECK(var[AttackClass::Real] > var[AttackClass::WrappedPrint]);
    CHECK(var[AttackClass::WrappedPrint] > 0.0);
    CHECK(var[AttackClass::Print] == 0.0);
    CHECK(var[AttackClass::Scan] == 0.0);
    CHECK(var[AttackClass::Mobile] == 0.0);
  }
}

TEST_CASE("rendering") {
  SUBCASE("print views are identical without noise") {
    const auto [lf, depth] = render_lightfield(finger(AttackClass::Print), 5, 5, 24, 24);
    const auto c = lf::center_view(lf);
    for (int u = 0; u < 5; ++u)
      for (int v = 0; v < 5; ++v) CHECK(lf::subaperture_view(lf, u, v) == c);
  }
  SUBCASE("real views are the centre appearance warped by k * depth") {
    const int n = 48;
    const auto spec = finger(AttackClass::Real);
    const auto [lf, depth] = render_lightfield(spec, 9, 9, n, n);
    const Image centre = render_center(spec, n, n);
    CHECK(lf::center_view(lf) == centre);
    const auto corner = lf::subaperture_view(lf, 0, 0);
    CHECK(!(corner == centre));
    float max_shift = 0.0f;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const float shift = kDisparityPerDepth * depth.at(s, t) * 4.0f;
        max_shift = std::max(max_shift, shift);
        const float ys = static_cast<float>(s) + shift, xs = static_cast<float>(t) + shift;
        if (ys > n - 2 || xs > n - 2) continue;
        CHECK(corner.at(s, t) == doctest::Approx(centre.bilinear(ys, xs)).epsilon(1e-5));
      }
    float max_depth = 0.0f;
    for (float v : depth.values()) max_depth = std::max(max_depth, v);
    CHECK(max_shift == doctest::Approx(kDisparityPerDepth * max_depth * 4.0f));
  }
  SUBCASE("deterministic") {
    const auto spec = finger(AttackClass::Scan, 0.02);
    const auto a = render_lightfield(spec, 5, 5, 32, 32);
    const auto b = render_lightfield(spec, 5, 5, 32, 32);
    CHECK(lf::encode_lightfield(a.first) == lf::encode_lightfield(b.first));
    CHECK(a.second == b.second);
  }
  SUBCASE("too small") {
    CHECK_THROWS_AS(render_lightfield(finger(AttackClass::Real), 5, 5, 8, 32), Error);
  }
  SUBCASE("appearance cues stay mild") {
    const auto real = render_center(finger(AttackClass::Print), 32, 32);
    for (float v : real.px) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
}

TEST_CASE("focus depth tracks the true relief of a finger") {
  const auto [lf, depth] = render_lightfield(finger(AttackClass::Real), 9, 9, 64, 64);
  const auto est = lf::depth_from_focus(lf, lf::linspace(0.0f, 1.5f, 16), 5);
  CHECK(pearson(est.values(), depth.values()) > 0.5);
}

TEST_CASE("dataset") {
  const CaptureDims dims{3, 3, 16, 16};
  const auto ds = make_dataset(2, 1, dims, 9, 0.01);
  REQUIRE(ds.samples.size() == 10);
  REQUIRE(ds.fields.size() == 10);
  std::map<AttackClass, int> hist;
  for (const auto& s : ds.samples) ++hist[s.label];
  for (auto c : kAllClasses) CHECK(hist[c] == 2);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(ds.manifest[i].label == ds.samples[i].label);
    CHECK(ds.samples[i].image == lf::center_view(ds.fields[i]));
  }

  const auto again = make_dataset(2, 1, dims, 9, 0.01);
  CHECK(format_manifest(again.manifest) == format_manifest(ds.manifest));
  for (std::size_t i = 0; i < ds.fields.size(); ++i)
    CHECK(lf::encode_lightfield(again.fields[i]) == lf::encode_lightfield(ds.fields[i]));

  CHECK_THROWS_AS(make_dataset(1, 1, dims, 9, 0.0), Error);
}

TEST_CASE("dataset at full subject count") {
  const auto ds = make_dataset(196, 1, {3, 3, 16, 16}, 1, 0.0);
  CHECK(ds.samples.size() == 980);
}

TEST_CASE("spoofs of a capture share the finger") {
  const auto real = capture_scene(4, 2, 1, AttackClass::Real, 0.0);
  const auto wrapped = capture_scene(4, 2, 1, AttackClass::WrappedPrint, 0.0);
  CHECK(real.base_radius == wrapped.base_radius);
  CHECK(real.subject_id == 2);
  const auto other = capture_scene(4, 3, 1, AttackClass::Real, 0.0);
  CHECK(other.base_radius != real.base_radius);
}

TEST_CASE("manifest") {
  std::vector<ManifestRecord> recs = {
      {"lf/a.lf5d", "depth/a.dpth", 0, AttackClass::Real, "train"},
      {"lf/b.lf5d", "depth/b.dpth", 7, AttackClass::Mobile, "test"},
  };
  const auto text = format_manifest(recs);
  CHECK(text == "lf/a.lf5d\tdepth/a.dpth\t0\tReal\ttrain\nlf/b.lf5d\tdepth/b.dpth\t7\tMobile\ttest\n");
  CHECK(parse_manifest(text) == recs);
  CHECK_THROWS_AS(parse_manifest("a\tb\t0\tReal\n"), Error);
  CHECK_THROWS_AS(parse_manifest("a\tb\tx\tReal\ttrain\n"), Error);
  CHECK_THROWS_AS(parse_manifest("a\tb\t0\tPhoto\ttrain\n"), Error);
}

TEST_CASE("generic scenes") {
  const auto scenes = make_generic_scenes(10, 32, 32, 4);
  REQUIRE(scenes.size() == 10);
  std::vector<int> per_shape(kGenericShapeCount, 0);
  for (const auto& s : scenes) {
    ++per_shape[static_cast<std::size_t>(s.shape)];
    CHECK(s.image.h == 32);
    for (float v : s.depth.values()) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
  for (int n : per_shape) CHECK(n == 2);
  const auto again = make_generic_scenes(10, 32, 32, 4);
  for (std::size_t i = 0; i < scenes.size(); ++i) CHECK(again[i].image == scenes[i].image);
}
