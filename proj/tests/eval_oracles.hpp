// Per-sample counting oracles for the evaluation metrics.
#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "fds/eval/metrics.hpp"

namespace fds::testing {

struct Outcome {
  int truth, predicted;
};

struct RandomOutcomes {
  int k;
  std::vector<Outcome> samples;
  eval::ConfusionMatrix cm() const {
    eval::ConfusionMatrix m(k);
    for (const auto& s : samples) m.add(s.truth, s.predicted);
    return m;
  }
};

/// Random labelled predictions with k in [2,5]; every draw has at least one
/// live and one spoof sample.
inline RandomOutcomes random_outcomes(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kd(2, 5), nd(2, 60);
  RandomOutcomes r{kd(rng), {}};
  std::uniform_int_distribution<int> cls(0, r.k - 1);
  const int n = nd(rng);
  r.samples.push_back({0, cls(rng)});
  r.samples.push_back({1 + cls(rng) % (r.k - 1), cls(rng)});
  for (int i = 2; i < n; ++i) r.samples.push_back({cls(rng), cls(rng)});
  return r;
}

inline double oracle_far(const std::vector<Outcome>& s) {
  long accepted = 0, spoofs = 0;
  for (const auto& o : s)
    if (o.truth != 0) {
      ++spoofs;
      if (o.predicted == 0) ++accepted;
    }
  return static_cast<double>(accepted) / static_cast<double>(spoofs);
}

inline double oracle_frr(const std::vector<Outcome>& s) {
  long rejected = 0, lives = 0;
  for (const auto& o : s)
    if (o.truth == 0) {
      ++lives;
      if (o.predicted != 0) ++rejected;
    }
  return static_cast<double>(rejected) / static_cast<double>(lives);
}

inline double oracle_crr(const std::vector<Outcome>& s) {
  long hit = 0;
  for (const auto& o : s) hit += o.truth == o.predicted;
  return static_cast<double>(hit) / static_cast<double>(s.size());
}

inline double oracle_binary_crr(const std::vector<Outcome>& s) {
  long hit = 0;
  for (const auto& o : s) hit += (o.truth == 0) == (o.predicted == 0);
  return static_cast<double>(hit) / static_cast<double>(s.size());
}

/// Random full rankings of k classes with labels.
inline std::pair<std::vector<std::vector<int>>, std::vector<int>> random_rankings(std::mt19937_64& rng, int k,
                                                                                   int n) {
  std::vector<std::vector<int>> rankings;
  std::vector<int> labels;
  std::uniform_int_distribution<int> cls(0, k - 1);
  for (int i = 0; i < n; ++i) {
    std::vector<int> r(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) r[static_cast<std::size_t>(c)] = c;
    std::shuffle(r.begin(), r.end(), rng);
    rankings.push_back(r);
    labels.push_back(cls(rng));
  }
  return {rankings, labels};
}

/// Enumerates every (sample, rank) pair directly.
inline std::vector<std::pair<int, double>> oracle_cmc(const std::vector<std::vector<int>>& rankings,
                                                      const std::vector<int>& labels) {
  const int k = static_cast<int>(rankings.front().size());
  std::vector<std::pair<int, double>> out;
  for (int r = 1; r <= k; ++r) {
    long hit = 0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
      bool found = false;
      for (int j = 0; j < r; ++j) found = found || rankings[i][static_cast<std::size_t>(j)] == labels[i];
      hit += found;
    }
    out.push_back({r, static_cast<double>(hit) / static_cast<double>(rankings.size())});
  }
  return out;
}

}  // namespace fds::testing
