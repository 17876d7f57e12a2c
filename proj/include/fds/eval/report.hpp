#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fds/eval/metrics.hpp"

namespace fds::eval {

/// One spoof row of the summary table. The attack's own samples form the
/// negative pool for FAR; FRR is the shared live rejection rate.
struct AttackRow {
  std::string name;
  double far = 0.0;
  double ter = 0.0;
  double hter = 0.0;
  double crr = 0.0;
};

struct MetricsReport {
  std::string mode;
  std::vector<std::string> class_names;  // index 0 is the live class
  ConfusionMatrix confusion{2};
  double far = 0.0, frr = 0.0, ter = 0.0, hter = 0.0, crr = 0.0;
  std::vector<std::pair<std::string, double>> per_class_crr;
  std::vector<std::pair<int, double>> cmc;
  std::uint64_t seed = 0;
  std::string config_digest;

  bool operator==(const MetricsReport&) const = default;
};

MetricsReport make_report(std::string mode, std::vector<std::string> class_names, const ConfusionMatrix& cm,
                          std::span<const std::vector<int>> rankings, std::span<const int> labels,
                          std::uint64_t seed, std::string config_digest);

std::vector<AttackRow> attack_rows(const MetricsReport& r);

std::string to_json(const MetricsReport& r);
MetricsReport report_from_json(std::string_view text);
std::string cmc_csv(const MetricsReport& r);
/// Mode / TER / HTER / CRR rows with NA for the live class.
std::string summary_table(std::span<const MetricsReport> reports);

/// FNV-1a 64-bit, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace fds::eval
