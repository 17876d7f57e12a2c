#include "fds/eval/split.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "fds/core/error.hpp"

namespace fds::eval {

Split split_dataset(std::span<const int> labels, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Split out;
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2) raise(Errc::ClassTooSmall, "class " + std::to_string(label) + " has fewer than two samples");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(label), 0x5711u};
    std::mt19937_64 rng(seq);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t half = idx.size() / 2;
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace fds::eval
