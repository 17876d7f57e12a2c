#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fds/core/image.hpp"

namespace fds::lf {

enum class ChannelLayout : std::uint8_t {
  LumaOnly = 0,  // every channel is a color channel
  LumaConf = 1,  // last channel is per-pixel confidence
};

struct LfDims {
  int nu = 0, nv = 0;  // angular
  int ns = 0, nt = 0;  // spatial (rows, cols)
  int nc = 1;          // channels
  std::size_t count() const {
    return static_cast<std::size_t>(nu) * nv * ns * nt * nc;
  }
  bool operator==(const LfDims&) const = default;
};

/// Dense 5D light field, samples laid out u, v, s, t, c (row-major).
///
/// Construction validates every invariant: odd angular dims, exact sample
/// count, finite samples within [0,1]. Color channels are averaged to luma on
/// access; the confidence channel is carried but not consumed here.
class LightField {
 public:
  LightField(LfDims dims, ChannelLayout layout, std::vector<float> samples);

  const LfDims& dims() const { return dims_; }
  ChannelLayout layout() const { return layout_; }
  const std::vector<float>& samples() const { return samples_; }

  int center_u() const { return dims_.nu / 2; }
  int center_v() const { return dims_.nv / 2; }

  float sample(int u, int v, int s, int t, int c) const {
    return samples_[index(u, v, s, t, c)];
  }
  float luma(int u, int v, int s, int t) const;

  bool operator==(const LightField&) const = default;

 private:
  std::size_t index(int u, int v, int s, int t, int c) const {
    return ((((static_cast<std::size_t>(u) * dims_.nv + v) * dims_.ns + s) * dims_.nt + t) *
            dims_.nc) + c;
  }

  LfDims dims_;
  ChannelLayout layout_;
  std::vector<float> samples_;
};

/// LF5D container: "LF5D", u8 version, u8 layout, u16 nu,nv,ns,nt,nc, f32 samples.
std::vector<unsigned char> encode_lightfield(const LightField& lf);
LightField decode_lightfield(const std::vector<unsigned char>& bytes);

/// Luma slice at fixed angular coordinate; IndexOutOfRange if (u,v) is outside.
Image subaperture_view(const LightField& lf, int u, int v);
Image center_view(const LightField& lf);

}  // namespace fds::lf
