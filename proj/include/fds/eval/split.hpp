#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fds::eval {

struct Split {
  std::vector<std::size_t> train;  // ascending sample indices
  std::vector<std::size_t> test;
};

/// Stratified 50/50 split: each class's samples are shuffled with a stream
/// keyed on (seed, class) and the first half (rounded down) goes to train.
/// Throws ClassTooSmall if a present class has fewer than two samples.
Split split_dataset(std::span<const int> labels, std::uint64_t seed);

}  // namespace fds::eval
