#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fds::eval {

/// k x k counts, rows = true class, columns = predicted class. Class 0 is
/// the live (Real) class; every other class is a spoof.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int k);

  void add(int truth, int predicted, std::int64_t count = 1);
  int k() const { return k_; }
  std::int64_t at(int truth, int predicted) const;
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_total(int truth) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  int k_;
  std::vector<std::int64_t> counts_;
};

/// Live-vs-spoof collapse: positive = Real.
/// TP real->real, FN real->any spoof, FP spoof->real, TN spoof->any spoof.
struct BinaryCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

BinaryCounts binary_collapse(const ConfusionMatrix& cm);

/// FP / (FP + TN); throws NoNegatives when there are no spoof samples.
double far(const BinaryCounts& c);
double far(const ConfusionMatrix& cm);
/// FN / (TP + FN); throws NoPositives when there are no real samples.
double frr(const BinaryCounts& c);
double frr(const ConfusionMatrix& cm);

struct ErrorRates {
  double ter = 0.0;
  double hter = 0.0;
};
/// ter = far + frr, hter = ter / 2.
ErrorRates ter_hter(double far, double frr);

/// trace / total; throws EmptyMatrix when total is zero.
double crr(const ConfusionMatrix& cm);
/// (TP + TN) / (TP + TN + FP + FN).
double crr(const BinaryCounts& c);

/// Recall of each class (NaN-free: classes without samples report 0).
std::vector<double> per_class_recall(const ConfusionMatrix& cm);

/// Cumulative match characteristic: for r = 1..k, the fraction of samples
/// whose true class is within the first r entries of its ranking.
std::vector<std::pair<int, double>> cmc(std::span<const std::vector<int>> rankings,
                                        std::span<const int> labels);

/// Accuracy restricted to samples of classes a and b, deciding between the
/// two by their scores (ties go to the lower class index).
double pairwise_accuracy(std::span<const std::vector<float>> scores, std::span<const int> labels, int a,
                         int b);

}  // namespace fds::eval
