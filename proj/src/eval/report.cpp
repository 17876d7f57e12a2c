#include "fds/eval/report.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "fds/core/error.hpp"

namespace fds::eval {

using ojson = nlohmann::ordered_json;

MetricsReport make_report(std::string mode, std::vector<std::string> class_names, const ConfusionMatrix& cm,
                          std::span<const std::vector<int>> rankings, std::span<const int> labels,
                          std::uint64_t seed, std::string config_digest) {
  if (static_cast<int>(class_names.size()) != cm.k())
    raise(Errc::SizeMismatch, "class names do not match confusion size");
  MetricsReport r;
  r.mode = std::move(mode);
  r.class_names = std::move(class_names);
  r.confusion = cm;
  const auto bc = binary_collapse(cm);
  r.far = far(bc);
  r.frr = frr(bc);
  const auto e = ter_hter(r.far, r.frr);
  r.ter = e.ter;
  r.hter = e.hter;
  r.crr = crr(cm);
  const auto recall = per_class_recall(cm);
  for (std::size_t i = 0; i < recall.size(); ++i) r.per_class_crr.emplace_back(r.class_names[i], recall[i]);
  r.cmc = cmc(rankings, labels);
  r.seed = seed;
  r.config_digest = std::move(config_digest);
  return r;
}

std::vector<AttackRow> attack_rows(const MetricsReport& r) {
  std::vector<AttackRow> rows;
  const auto& cm = r.confusion;
  for (int a = 1; a < cm.k(); ++a) {
    AttackRow row;
    row.name = r.class_names[static_cast<std::size_t>(a)];
    const auto n = cm.row_total(a);
    row.far = n == 0 ? 0.0 : static_cast<double>(cm.at(a, 0)) / static_cast<double>(n);
    const auto e = ter_hter(row.far, r.frr);
    row.ter = e.ter;
    row.hter = e.hter;
    row.crr = r.per_class_crr[static_cast<std::size_t>(a)].second;
    rows.push_back(row);
  }
  return rows;
}

std::string to_json(const MetricsReport& r) {
  ojson j;
  j["mode"] = r.mode;
  ojson conf = ojson::array();
  for (int t = 0; t < r.confusion.k(); ++t) {
    ojson row = ojson::array();
    for (int p = 0; p < r.confusion.k(); ++p) row.push_back(r.confusion.at(t, p));
    conf.push_back(row);
  }
  j["confusion"] = conf;
  j["far"] = r.far;
  j["frr"] = r.frr;
  j["ter"] = r.ter;
  j["hter"] = r.hter;
  j["crr"] = r.crr;
  ojson pc = ojson::object();
  for (const auto& [name, v] : r.per_class_crr) pc[name] = v;
  j["per_class_crr"] = pc;
  ojson curve = ojson::array();
  for (const auto& [rank, acc] : r.cmc) curve.push_back(ojson::array({rank, acc}));
  j["cmc"] = curve;
  j["seed"] = r.seed;
  j["config_digest"] = r.config_digest;
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::InvalidArgument, std::string("metrics JSON: ") + e.what());
  }
  try {
    MetricsReport r;
    r.mode = j.at("mode").get<std::string>();
    const auto& conf = j.at("confusion");
    r.confusion = ConfusionMatrix(static_cast<int>(conf.size()));
    for (std::size_t t = 0; t < conf.size(); ++t) {
      if (conf[t].size() != conf.size()) raise(Errc::InvalidArgument, "confusion matrix is not square");
      for (std::size_t p = 0; p < conf.size(); ++p)
        r.confusion.add(static_cast<int>(t), static_cast<int>(p), conf[t][p].get<std::int64_t>());
    }
    r.far = j.at("far").get<double>();
    r.frr = j.at("frr").get<double>();
    r.ter = j.at("ter").get<double>();
    r.hter = j.at("hter").get<double>();
    r.crr = j.at("crr").get<double>();
    for (const auto& [name, v] : j.at("per_class_crr").items()) {
      r.class_names.push_back(name);
      r.per_class_crr.emplace_back(name, v.get<double>());
    }
    for (const auto& e : j.at("cmc")) r.cmc.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_digest = j.at("config_digest").get<std::string>();
    if (static_cast<int>(r.class_names.size()) != r.confusion.k())
      raise(Errc::InvalidArgument, "per_class_crr does not match confusion size");
    return r;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::InvalidArgument, std::string("metrics JSON: ") + e.what());
  }
}

std::string cmc_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "rank,accuracy\n";
  char buf[64];
  for (const auto& [rank, acc] : r.cmc) {
    std::snprintf(buf, sizeof buf, "%d,%.6f\n", rank, acc);
    os << buf;
  }
  return os.str();
}

std::string summary_table(std::span<const MetricsReport> reports) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %8s %8s %8s\n", "Mode", "TER", "HTER", "CRR");
  os << buf;
  for (const auto& r : reports) {
    os << "-- " << (r.mode == "two" ? "two-class" : "multi-class") << " (crr " << r.crr << ")\n";
    std::snprintf(buf, sizeof buf, "%-22s %8s %8s %8.2f\n", r.class_names.front().c_str(), "NA", "NA",
                  100.0 * r.per_class_crr.front().second);
    os << buf;
    for (const auto& row : attack_rows(r)) {
      std::snprintf(buf, sizeof buf, "%-22s %8.3f %8.4f %8.2f\n", row.name.c_str(), row.ter, row.hter,
                    100.0 * row.crr);
      os << buf;
    }
  }
  os << "per-attack TER = attack-class FAR + live FRR\n";
  return os.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fds::eval
