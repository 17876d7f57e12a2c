#include "fds/eval/metrics.hpp"

#include <algorithm>
#include <string>

#include "fds/core/error.hpp"

namespace fds::eval {

ConfusionMatrix::ConfusionMatrix(int k) : k_(k), counts_(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0) {
  if (k < 2) raise(Errc::InvalidArgument, "confusion matrix needs at least two classes");
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
  if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
    raise(Errc::LabelOutOfRange, "confusion entry (" + std::to_string(truth) + "," + std::to_string(predicted) + ")");
  }
  if (count < 0) raise(Errc::InvalidArgument, "negative count");
  counts_[static_cast<std::size_t>(truth * k_ + predicted)] += count;
}

std::int64_t ConfusionMatrix::at(int truth, int predicted) const {
  return counts_.at(static_cast<std::size_t>(truth * k_ + predicted));
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (int i = 0; i < k_; ++i) t += at(i, i);
  return t;
}

std::int64_t ConfusionMatrix::row_total(int truth) const {
  std::int64_t t = 0;
  for (int j = 0; j < k_; ++j) t += at(truth, j);
  return t;
}

BinaryCounts binary_collapse(const ConfusionMatrix& cm) {
  BinaryCounts c;
  for (int t = 0; t < cm.k(); ++t)
    for (int p = 0; p < cm.k(); ++p) {
      const auto n = cm.at(t, p);
      if (t == 0) (p == 0 ? c.tp : c.fn) += n;
      else (p == 0 ? c.fp : c.tn) += n;
    }
  return c;
}

double far(const BinaryCounts& c) {
  if (c.fp + c.tn == 0) raise(Errc::NoNegatives, "FAR undefined without spoof samples");
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

double far(const ConfusionMatrix& cm) { return far(binary_collapse(cm)); }

double frr(const BinaryCounts& c) {
  if (c.tp + c.fn == 0) raise(Errc::NoPositives, "FRR undefined without real samples");
  return static_cast<double>(c.fn) / static_cast<double>(c.tp + c.fn);
}

double frr(const ConfusionMatrix& cm) { return frr(binary_collapse(cm)); }

ErrorRates ter_hter(double far_v, double frr_v) {
  const double ter = far_v + frr_v;
  return {ter, ter / 2.0};
}

double crr(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) raise(Errc::EmptyMatrix, "CRR of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double crr(const BinaryCounts& c) {
  const auto total = c.tp + c.tn + c.fp + c.fn;
  if (total == 0) raise(Errc::EmptyMatrix, "CRR of empty counts");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

std::vector<double> per_class_recall(const ConfusionMatrix& cm) {
  std::vector<double> out;
  for (int i = 0; i < cm.k(); ++i) {
    const auto row = cm.row_total(i);
    out.push_back(row == 0 ? 0.0 : static_cast<double>(cm.at(i, i)) / static_cast<double>(row));
  }
  return out;
}

std::vector<std::pair<int, double>> cmc(std::span<const std::vector<int>> rankings, std::span<const int> labels) {
  if (rankings.empty()) raise(Errc::EmptyInput, "CMC of no predictions");
  if (rankings.size() != labels.size()) raise(Errc::SizeMismatch, "rankings and labels differ in length");
  const std::size_t k = rankings.front().size();
  std::vector<std::int64_t> first_hit(k + 1, 0);
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto& r = rankings[i];
    if (r.size() != k) raise(Errc::SizeMismatch, "predictions disagree on class count");
    const auto it = std::find(r.begin(), r.end(), labels[i]);
    if (it == r.end()) raise(Errc::LabelOutOfRange, "true class missing from ranking");
    ++first_hit[static_cast<std::size_t>(it - r.begin())];
  }
  std::vector<std::pair<int, double>> curve;
  std::int64_t cum = 0;
  const double n = static_cast<double>(rankings.size());
  for (std::size_t r = 0; r < k; ++r) {
    cum += first_hit[r];
    curve.emplace_back(static_cast<int>(r + 1), static_cast<double>(cum) / n);
  }
  return curve;
}

double pairwise_accuracy(std::span<const std::vector<float>> scores, std::span<const int> labels, int a, int b) {
  if (scores.size() != labels.size()) raise(Errc::SizeMismatch, "scores and labels differ in length");
  if (a == b) raise(Errc::InvalidArgument, "pairwise accuracy needs two distinct classes");
  const int lo = std::min(a, b), hi = std::max(a, b);
  std::int64_t n = 0, ok = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != a && labels[i] != b) continue;
    const auto& s = scores[i];
    const int pick = s.at(static_cast<std::size_t>(hi)) > s.at(static_cast<std::size_t>(lo)) ? hi : lo;
    ++n;
    ok += pick == labels[i];
  }
  if (n == 0) raise(Errc::EmptyInput, "no samples of either class");
  return static_cast<double>(ok) / static_cast<double>(n);
}

}  // namespace fds::eval
