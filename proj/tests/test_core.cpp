#include <doctest.h>

#include <cmath>
#include <limits>

#include "fds/core/bytes.hpp"
#include "fds/core/error.hpp"
#include "fds/core/image.hpp"

using namespace fds;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("error messages carry the category name") {
  const Error e(Errc::WindowTooLarge, "window 9");
  CHECK(std::string(e.what()) == "WindowTooLarge: window 9");
  CHECK(errc_name(Errc::DivergedNaN) == "DivergedNaN");
}

TEST_CASE("bilinear sampling of a constant image is exact") {
  const Image img(5, 7, 0.3f);
  for (float y : {-2.0f, 0.25f, 3.7f, 9.0f})
    for (float x : {-1.5f, 2.5f, 6.9f}) CHECK(img.bilinear(y, x) == 0.3f);
  Image ramp(2, 2, std::vector<float>{0.0f, 1.0f, 2.0f, 3.0f});
  CHECK(ramp.bilinear(0.5f, 0.5f) == doctest::Approx(1.5f));
  CHECK(ramp.clamped(-3, 5) == 1.0f);
}

TEST_CASE("depth maps validate their values") {
  CHECK(code_of([] { DepthMap(2, 2, {0.0f, 0.5f, 1.0f, 1.5f}); }) == Errc::SampleOutOfRange);
  CHECK(code_of([] { DepthMap(2, 2, {0.0f, std::nanf(""), 1.0f, 0.5f}); }) == Errc::NonFiniteSample);
  CHECK(code_of([] { DepthMap(2, 2, {0.0f}); }) == Errc::SizeMismatch);
}

TEST_CASE("depth map container round trip") {
  const DepthMap d(3, 4, {0, 0.1f, 0.2f, 0.3f, 0.4f, 0.5f, 0.6f, 0.7f, 0.8f, 0.9f, 1.0f, 0.25f});
  const auto bytes = encode_depthmap(d);
  CHECK(bytes.size() == 4 + 1 + 4 + 12 * 4);
  CHECK(decode_depthmap(bytes) == d);
  CHECK(encode_depthmap(decode_depthmap(bytes)) == bytes);

  auto bad = bytes;
  bad[1] = 'X';
  CHECK(code_of([&] { decode_depthmap(bad); }) == Errc::BadMagic);
  bad = bytes;
  bad[4] = 2;
  CHECK(code_of([&] { decode_depthmap(bad); }) == Errc::VersionUnsupported);
  bad = bytes;
  bad.pop_back();
  CHECK(code_of([&] { decode_depthmap(bad); }) == Errc::SizeMismatch);
  bad = bytes;
  bad.push_back(0);
  CHECK(code_of([&] { decode_depthmap(bad); }) == Errc::SizeMismatch);
}

TEST_CASE("byte writer is little-endian") {
  ByteWriter w;
  w.magic("AB");
  w.u16(0x0102);
  w.u32(0x03040506);
  const auto b = w.take();
  CHECK(b == std::vector<unsigned char>{'A', 'B', 0x02, 0x01, 0x06, 0x05, 0x04, 0x03});
  ByteReader r(b);
  r.expect_magic("AB");
  CHECK(r.u16() == 0x0102);
  CHECK(r.u32() == 0x03040506u);
  CHECK(r.remaining() == 0);
  CHECK(code_of([&] { r.u8(); }) == Errc::SizeMismatch);
}

TEST_CASE("mean and variance") {
  const Image img(1, 4, std::vector<float>{1, 2, 3, 4});
  CHECK(mean(img) == doctest::Approx(2.5));
  CHECK(variance(img) == doctest::Approx(1.25));
}
