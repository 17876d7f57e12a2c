#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <random>
#include <set>

#include "eval_oracles.hpp"
#include "fds/core/error.hpp"
#include "fds/eval/metrics.hpp"
#include "fds/eval/report.hpp"
#include "fds/eval/split.hpp"

using namespace fds;
using namespace fds::eval;
using namespace fds::testing;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("binary metric examples") {
  CHECK(far(BinaryCounts{0, 10, 0, 0}) == 0.0);
  CHECK(far(BinaryCounts{0, 8, 2, 0}) == 0.2);
  CHECK(frr(BinaryCounts{7, 0, 0, 0}) == 0.0);
  CHECK(frr(BinaryCounts{3, 0, 0, 1}) == 0.25);
  CHECK(crr(BinaryCounts{3, 4, 2, 1}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(code_of([] { far(BinaryCounts{5, 0, 0, 1}); }) == Errc::NoNegatives);
  CHECK(code_of([] { frr(BinaryCounts{0, 5, 1, 0}); }) == Errc::NoPositives);

  const auto a = ter_hter(0.1, 0.05);
  CHECK(a.ter == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(a.hter == doctest::Approx(0.075).epsilon(1e-15));
  CHECK(ter_hter(0.777, 0.0).hter == doctest::Approx(0.3885).epsilon(1e-15));
  CHECK(ter_hter(0.0, 0.0).ter == 0.0);
  CHECK(ter_hter(0.0, 0.0).hter == 0.0);
}

TEST_CASE("confusion matrix") {
  ConfusionMatrix cm(3);
  cm.add(0, 0, 4);
  cm.add(1, 2);
  cm.add(2, 0, 2);
  CHECK(cm.total() == 7);
  CHECK(cm.trace() == 4);
  CHECK(cm.row_total(2) == 2);
  const auto b = binary_collapse(cm);
  CHECK(b.tp == 4);
  CHECK(b.fn == 0);
  CHECK(b.fp == 2);
  CHECK(b.tn == 1);
  CHECK(code_of([] { ConfusionMatrix(1); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { cm.add(3, 0); }) == Errc::LabelOutOfRange);
  CHECK(code_of([] { crr(ConfusionMatrix(2)); }) == Errc::EmptyMatrix);

  ConfusionMatrix diag(4);
  for (int c = 0; c < 4; ++c) diag.add(c, c, c + 1);
  CHECK(crr(diag) == 1.0);
  CHECK(per_class_recall(diag) == std::vector<double>{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("metrics agree with per-sample counting") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = random_outcomes(rng);
    const auto cm = r.cm();
    CHECK(far(cm) == oracle_far(r.samples));
    CHECK(frr(cm) == oracle_frr(r.samples));
    CHECK(crr(cm) == oracle_crr(r.samples));
    CHECK(crr(binary_collapse(cm)) == oracle_binary_crr(r.samples));
    const auto e = ter_hter(far(cm), frr(cm));
    CHECK(std::abs(e.ter - (far(cm) + frr(cm))) <= 1e-12);
    CHECK(std::abs(e.hter - e.ter / 2.0) <= 1e-12);
  }
}

TEST_CASE("binary collapse ignores how spoof classes are numbered") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_outcomes(rng);
    std::vector<int> perm(static_cast<std::size_t>(r.k));
    for (int c = 0; c < r.k; ++c) perm[static_cast<std::size_t>(c)] = c;
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    ConfusionMatrix relabelled(r.k);
    for (const auto& s : r.samples)
      relabelled.add(perm[static_cast<std::size_t>(s.truth)], perm[static_cast<std::size_t>(s.predicted)]);
    const auto cm = r.cm();
    CHECK(far(relabelled) == far(cm));
    CHECK(frr(relabelled) == frr(cm));
    CHECK(crr(relabelled) == crr(cm));
  }
}

TEST_CASE("cmc") {
  SUBCASE("matches direct enumeration") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const auto [rankings, labels] = random_rankings(rng, 5, 1 + trial);
      const auto curve = cmc(rankings, labels);
      CHECK(curve == oracle_cmc(rankings, labels));
      for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second);
      CHECK(curve.back().second == 1.0);
    }
  }
  SUBCASE("perfect predictions give a flat curve") {
    std::vector<std::vector<int>> rankings = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}};
    std::vector<int> labels = {0, 1, 2};
    for (const auto& [rank, acc] : cmc(rankings, labels)) CHECK(acc == 1.0);
  }
  SUBCASE("errors") {
    std::vector<std::vector<int>> none;
    std::vector<int> no_labels;
    CHECK(code_of([&] { cmc(none, no_labels); }) == Errc::EmptyInput);
    std::vector<std::vector<int>> one = {{0, 1}};
    std::vector<int> two = {0, 1};
    CHECK(code_of([&] { cmc(one, two); }) == Errc::SizeMismatch);
  }
}

TEST_CASE("pairwise accuracy") {
  std::vector<std::vector<float>> scores = {{0.6f, 0.1f, 0.3f}, {0.2f, 0.1f, 0.7f}, {0.5f, 0.4f, 0.1f}, {0.3f, 0.3f, 0.4f}};
  std::vector<int> labels = {0, 2, 1, 2};
  // sample 0 correct (0.6 > 0.3), sample 1 correct, sample 2 ignored, sample 3 correct
  CHECK(pairwise_accuracy(scores, labels, 0, 2) == 1.0);
  // sample 0 correct, sample 2 wrong (0.5 > 0.4)
  CHECK(pairwise_accuracy(scores, labels, 0, 1) == 0.5);
}

TEST_CASE("stratified split") {
  const std::vector<int> labels = {0, 1, 2, 3, 4, 0, 1, 2, 3, 4};
  const auto s = split_dataset(labels, 9);
  std::multiset<int> tr, te;
  for (auto i : s.train) tr.insert(labels[i]);
  for (auto i : s.test) te.insert(labels[i]);
  CHECK(tr == std::multiset<int>{0, 1, 2, 3, 4});
  CHECK(te == std::multiset<int>{0, 1, 2, 3, 4});

  std::vector<int> many;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 97; ++i) many.push_back(static_cast<int>(rng() % 5));
  for (int c = 0; c < 5; ++c) many.push_back(c), many.push_back(c);
  const auto a = split_dataset(many, 4);
  std::vector<std::size_t> all(a.train);
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(all.size() == many.size());
  CHECK(std::is_sorted(a.train.begin(), a.train.end()));
  const auto b = split_dataset(many, 4);
  CHECK(a.train == b.train);
  CHECK(split_dataset(many, 5).train != a.train);

  const std::vector<int> lonely = {0, 0, 1};
  CHECK(code_of([&] { split_dataset(lonely, 1); }) == Errc::ClassTooSmall);
}

TEST_CASE("report serialization") {
  ConfusionMatrix cm(5);
  cm.add(0, 0, 6);
  cm.add(0, 4, 2);
  cm.add(1, 2, 3);
  cm.add(1, 1, 5);
  cm.add(2, 2, 8);
  cm.add(3, 3, 8);
  cm.add(4, 4, 7);
  cm.add(4, 0, 1);
  std::mt19937_64 rng(5);
  auto [rankings, labels] = random_rankings(rng, 5, 12);
  const auto r = make_report("multi", {"Real", "Print", "WrappedPrint", "Scan", "Mobile"}, cm, rankings, labels, 17,
                             "00000000deadbeef");
  CHECK(r.far == doctest::Approx(1.0 / 32.0));
  CHECK(r.frr == doctest::Approx(0.25));
  CHECK(r.hter == r.ter / 2.0);
  CHECK(r.per_class_crr.size() == 5);
  CHECK(r.per_class_crr[1].second == doctest::Approx(5.0 / 8.0));

  const auto text = to_json(r);
  const auto j = nlohmann::json::parse(text);
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  CHECK(keys == std::set<std::string>{"mode", "confusion", "far", "frr", "ter", "hter", "crr", "per_class_crr", "cmc",
                                      "seed", "config_digest"});
  CHECK(j["cmc"].size() == 5);
  CHECK(j["per_class_crr"]["Mobile"].get<double>() == doctest::Approx(7.0 / 8.0));
  CHECK(report_from_json(text) == r);
  CHECK(to_json(report_from_json(text)) == text);
  CHECK(code_of([] { report_from_json("{not json"); }) == Errc::InvalidArgument);

  const auto rows = attack_rows(r);
  REQUIRE(rows.size() == 4);
  CHECK(rows[3].name == "Mobile");
  CHECK(rows[3].far == doctest::Approx(1.0 / 8.0));
  CHECK(rows[3].ter == doctest::Approx(1.0 / 8.0 + 0.25));
  CHECK(rows[0].far == 0.0);

  const auto csv = cmc_csv(r);
  CHECK(csv.rfind("rank,accuracy\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const auto table = summary_table(std::span(&r, 1));
  CHECK(table.find("NA") != std::string::npos);
  CHECK(table.find("Mobile") != std::string::npos);
}

TEST_CASE("two-class report lists both classes") {
  ConfusionMatrix cm(2);
  cm.add(0, 0, 7);
  cm.add(0, 1, 1);
  cm.add(1, 1, 30);
  cm.add(1, 0, 2);
  std::vector<std::vector<int>> rankings(40, std::vector<int>{0, 1});
  std::vector<int> labels(40, 0);
  const auto r = make_report("two", {"Real", "Spoof"}, cm, rankings, labels, 1, "x");
  CHECK(r.per_class_crr.size() == 2);
  CHECK(r.crr == doctest::Approx(37.0 / 40.0));
  CHECK(r.far == doctest::Approx(2.0 / 32.0));
  CHECK(r.frr == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
