#pragma once

#include <cstdint>
#include <vector>

#include "fds/nn/network.hpp"

namespace fds::nn {

/// NNCK layout (little-endian): "NNCK", u8 version, u32 layer count, then per
/// layer u32 id, u32 tensor count, and per tensor u8 rank, u32 dims, f32 data.
std::vector<unsigned char> encode_checkpoint(const Network& net);

/// Loads parameters into a network of identical structure. Throws BadMagic,
/// VersionUnsupported, SizeMismatch or CheckpointMismatch.
void load_checkpoint(Network& net, const std::vector<unsigned char>& bytes);

struct CheckpointLayer {
  std::uint32_t id = 0;
  std::vector<Tensor> tensors;
};

/// Structure-free decode of a checkpoint's layer records.
std::vector<CheckpointLayer> decode_checkpoint(const std::vector<unsigned char>& bytes);

}  // namespace fds::nn
