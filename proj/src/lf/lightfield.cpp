#include "fds/lf/lightfield.hpp"

#include <cmath>
#include <string>

#include "fds/core/bytes.hpp"
#include "fds/core/error.hpp"

namespace fds::lf {

namespace {
constexpr std::string_view kMagic = "LF5D";
constexpr std::uint8_t kVersion = 1;
}  // namespace

LightField::LightField(LfDims dims, ChannelLayout layout, std::vector<float> samples)
    : dims_(dims), layout_(layout), samples_(std::move(samples)) {
  if (dims_.nu <= 0 || dims_.nv <= 0 || dims_.ns <= 0 || dims_.nt <= 0 || dims_.nc <= 0) {
    raise(Errc::InvalidDims, "light field dims must be positive");
  }
  if (dims_.nu % 2 == 0 || dims_.nv % 2 == 0) {
    raise(Errc::InvalidDims, "angular dims must be odd");
  }
  if (layout_ != ChannelLayout::LumaOnly && layout_ != ChannelLayout::LumaConf) {
    raise(Errc::InvalidDims, "unknown channel layout");
  }
  if (layout_ == ChannelLayout::LumaConf && dims_.nc < 2) {
    raise(Errc::InvalidDims, "LumaConf layout needs at least two channels");
  }
  if (samples_.size() != dims_.count()) {
    raise(Errc::SizeMismatch, "sample count " + std::to_string(samples_.size()) +
                                  " != declared " + std::to_string(dims_.count()));
  }
  for (float x : samples_) {
    if (!std::isfinite(x)) raise(Errc::NonFiniteSample, "light field sample is not finite");
    if (x < 0.0f || x > 1.0f) raise(Errc::SampleOutOfRange, "light field sample outside [0,1]");
  }
}

float LightField::luma(int u, int v, int s, int t) const {
  const int colors = layout_ == ChannelLayout::LumaConf ? dims_.nc - 1 : dims_.nc;
  const std::size_t base = index(u, v, s, t, 0);
  if (colors == 1) return samples_[base];
  float sum = 0.0f;
  for (int c = 0; c < colors; ++c) sum += samples_[base + c];
  return sum / static_cast<float>(colors);
}

std::vector<unsigned char> encode_lightfield(const LightField& lf) {
  const auto& d = lf.dims();
  ByteWriter out;
  out.magic(kMagic);
  out.u8(kVersion);
  out.u8(static_cast<std::uint8_t>(lf.layout()));
  for (int dim : {d.nu, d.nv, d.ns, d.nt, d.nc}) out.u16(static_cast<std::uint16_t>(dim));
  out.f32s(lf.samples());
  return out.take();
}

LightField decode_lightfield(const std::vector<unsigned char>& bytes) {
  ByteReader in(bytes);
  in.expect_magic(kMagic);
  const auto version = in.u8();
  if (version != kVersion) raise(Errc::VersionUnsupported, "LF5D version " + std::to_string(version));
  const auto layout = in.u8();
  LfDims d;
  d.nu = in.u16();
  d.nv = in.u16();
  d.ns = in.u16();
  d.nt = in.u16();
  d.nc = in.u16();
  if (in.remaining() != d.count() * sizeof(float)) {
    raise(Errc::SizeMismatch, "LF5D payload is " + std::to_string(in.remaining()) +
                                  " bytes, header declares " + std::to_string(d.count()) + " floats");
  }
  return LightField(d, static_cast<ChannelLayout>(layout), in.f32s(d.count()));
}

Image subaperture_view(const LightField& lf, int u, int v) {
  const auto& d = lf.dims();
  if (u < 0 || u >= d.nu || v < 0 || v >= d.nv) {
    raise(Errc::IndexOutOfRange, "view (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  Image img(d.ns, d.nt);
  for (int s = 0; s < d.ns; ++s)
    for (int t = 0; t < d.nt; ++t) img.at(s, t) = lf.luma(u, v, s, t);
  return img;
}

Image center_view(const LightField& lf) { return subaperture_view(lf, lf.center_u(), lf.center_v()); }

}  // namespace fds::lf
