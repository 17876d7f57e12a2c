#include "fds/nn/checkpoint.hpp"

#include <string>

#include "fds/core/bytes.hpp"
#include "fds/core/error.hpp"

namespace fds::nn {

namespace {
constexpr std::string_view kMagic = "NNCK";
constexpr std::uint8_t kVersion = 1;
}  // namespace

std::vector<unsigned char> encode_checkpoint(const Network& net) {
  ByteWriter out;
  out.magic(kMagic);
  out.u8(kVersion);
  out.u32(static_cast<std::uint32_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) {
    const auto& params = net.layer(i).params;
    out.u32(static_cast<std::uint32_t>(i));
    out.u32(static_cast<std::uint32_t>(params.size()));
    for (const auto& t : params) {
      out.u8(static_cast<std::uint8_t>(t.rank()));
      for (int d : t.shape()) out.u32(static_cast<std::uint32_t>(d));
      out.f32s(t.span());
    }
  }
  return out.take();
}

std::vector<CheckpointLayer> decode_checkpoint(const std::vector<unsigned char>& bytes) {
  ByteReader in(bytes);
  in.expect_magic(kMagic);
  if (in.u8() != kVersion) raise(Errc::VersionUnsupported, "NNCK version");
  const std::uint32_t count = in.u32();
  std::vector<CheckpointLayer> layers;
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointLayer l;
    l.id = in.u32();
    const std::uint32_t tensors = in.u32();
    for (std::uint32_t j = 0; j < tensors; ++j) {
      const int rank = in.u8();
      Shape shape;
      for (int r = 0; r < rank; ++r) shape.push_back(static_cast<int>(in.u32()));
      l.tensors.emplace_back(shape, in.f32s(numel(shape)));
    }
    layers.push_back(std::move(l));
  }
  if (in.remaining() != 0) raise(Errc::SizeMismatch, "trailing bytes after NNCK payload");
  return layers;
}

void load_checkpoint(Network& net, const std::vector<unsigned char>& bytes) {
  auto layers = decode_checkpoint(bytes);
  if (layers.size() != static_cast<std::size_t>(net.size())) {
    raise(Errc::CheckpointMismatch, "checkpoint has " + std::to_string(layers.size()) + " layers, network " +
                                        std::to_string(net.size()));
  }
  for (int i = 0; i < net.size(); ++i) {
    auto& rec = layers[static_cast<std::size_t>(i)];
    auto& params = net.layer(i).params;
    if (rec.id != static_cast<std::uint32_t>(i) || rec.tensors.size() != params.size()) {
      raise(Errc::CheckpointMismatch, "layer record " + std::to_string(i));
    }
    for (std::size_t j = 0; j < params.size(); ++j) {
      if (rec.tensors[j].shape() != params[j].shape()) {
        raise(Errc::CheckpointMismatch, "layer " + std::to_string(i) + " tensor shape " + shape_str(rec.tensors[j].shape()));
      }
    }
  }
  for (int i = 0; i < net.size(); ++i) {
    auto& params = net.layer(i).params;
    for (std::size_t j = 0; j < params.size(); ++j) params[j] = std::move(layers[static_cast<std::size_t>(i)].tensors[j]);
  }
}

}  // namespace fds::nn
