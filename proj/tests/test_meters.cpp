#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/meters.hpp"

using namespace dispersolve;

namespace {

double param(const MeterRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.params) {
    if (k == key) return v;
  }
  FAIL("missing parameter " << key);
  return 0.0;
}

}  // namespace

TEST_CASE("indicator meter compares against min(T, 1/R)") {
  auto sw = default_sweep(MeterKind::Lemma24);
  sw.axes = {{"T", {0.25, 2.0}}, {"R", {4, 64}}};
  const auto rep = run_meter(MeterKind::Lemma24, sw);
  REQUIRE(rep.records.size() == 4);
  for (const auto& r : rep.records) {
    CHECK(r.rhs == std::min(param(r, "T"), 1.0 / param(r, "R")));
    CHECK(r.ratio == Catch::Approx(r.lhs / r.rhs));
    CHECK_FALSE(r.excluded);
  }
}

TEST_CASE("commutator at s = 0 obeys the sup-norm embedding bound") {
  // [d_x, f] g = f_x g, so the ratio is at most sup|f_x| / ||f_x||_{H^1}, which
  // on a 2 pi torus without mean is at most sqrt(sum_{k != 0} (1+|k|)^-2 / (2 pi)).
  const double s_sum = std::numbers::pi * std::numbers::pi / 3.0 - 2.0;
  const double bound = std::sqrt(s_sum / (2.0 * std::numbers::pi));
  auto sw = default_sweep(MeterKind::Commutator);
  sw.axes = {{"s", {0.0}}, {"n_f", {1, 2, 4}}, {"n_g", {8, 32}}};
  const auto rep = run_meter(MeterKind::Commutator, sw);
  for (const auto& r : rep.records) {
    CHECK(r.ratio > 0.0);
    CHECK(r.ratio <= bound * (1 + 1e-12));
  }
}

TEST_CASE("modulation meters exclude tuples outside their ranges") {
  auto sw = default_sweep(MeterKind::Lemma42B1);
  sw.axes = {{"N", {4}}, {"B", {4, 32}}};  // alpha = 1: 32 > 4^2
  const auto rep = run_meter(MeterKind::Lemma42B1, sw);
  REQUIRE(rep.records.size() == 2);
  CHECK_FALSE(rep.records[0].excluded);
  CHECK(rep.records[1].excluded);
  CHECK(rep.excluded == 1);

  auto sw2 = default_sweep(MeterKind::Lemma42B2);
  sw2.axes = {{"N", {4}}, {"B", {4, 64}}};  // <4>^2 = 17
  const auto rep2 = run_meter(MeterKind::Lemma42B2, sw2);
  CHECK(rep2.records[0].excluded);
  CHECK_FALSE(rep2.records[1].excluded);

  auto sw3 = default_sweep(MeterKind::Lemma25);
  sw3.axes = {{"T", {0.5}}, {"R", {4}}, {"l_over_r", {8}}};
  CHECK(run_meter(MeterKind::Lemma25, sw3).records[0].excluded);

  auto sw4 = default_sweep(MeterKind::EstPi);
  sw4.axes = {{"n1", {8}}, {"n2", {4}}, {"n3", {4}}, {"periods", {2}}};
  CHECK(run_meter(MeterKind::EstPi, sw4).records[0].excluded);
}

TEST_CASE("sweeps reject unknown and missing axes") {
  auto sw = default_sweep(MeterKind::Lemma24);
  sw.axes.push_back({"N", {1}});
  CHECK_THROWS_AS(run_meter(MeterKind::Lemma24, sw), ArgumentError);
  sw = default_sweep(MeterKind::Lemma24);
  sw.axes.pop_back();
  CHECK_THROWS_AS(run_meter(MeterKind::Lemma24, sw), ArgumentError);
  CHECK_THROWS_AS(parse_meter("lemma99"), ArgumentError);
  for (auto k : {MeterKind::EstPi, MeterKind::Lemma24, MeterKind::Lemma25, MeterKind::Lemma42B1,
                 MeterKind::Lemma42B2, MeterKind::Commutator}) {
    CHECK(parse_meter(to_string(k)) == k);
  }
}

TEST_CASE("sweeps are reproducible and stored in sweep order") {
  auto sw = default_sweep(MeterKind::EstPi);
  sw.axes = {{"n1", {1, 4}}, {"n2", {8}}, {"n3", {8, 16}}, {"periods", {2}}};
  const auto a = run_meter(MeterKind::EstPi, sw);
  const auto b = run_meter(MeterKind::EstPi, sw);
  REQUIRE(a.records.size() == 4);
  CHECK(param(a.records[1], "n1") == 1);
  CHECK(param(a.records[1], "n3") == 16);
  CHECK(param(a.records[2], "n1") == 4);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].lhs == b.records[i].lhs);
    CHECK(a.records[i].rhs == b.records[i].rhs);
  }
  CHECK(to_json_lines(a) == to_json_lines(b));
  sw.seed = 99;
  CHECK(run_meter(MeterKind::EstPi, sw).records[0].lhs != a.records[0].lhs);
}

TEST_CASE("json lines carry one record per line") {
  auto sw = default_sweep(MeterKind::Lemma24);
  sw.axes = {{"T", {0.5}}, {"R", {8, 16, 32}}};
  const auto rep = run_meter(MeterKind::Lemma24, sw);
  std::istringstream in(to_json_lines(rep));
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++count;
    CHECK(line.find("\"lemma\"") != std::string::npos);
    CHECK(line.find("\"ratio\"") != std::string::npos);
  }
  CHECK(count == 3);
}

TEST_CASE("stability flag follows max and median ratios") {
  auto sw = default_sweep(MeterKind::Lemma24);
  const auto rep = run_meter(MeterKind::Lemma24, sw);
  CHECK(rep.counterexamples == 0);
  CHECK(rep.stable == (rep.max_ratio <= sw.stability_factor * rep.median_ratio));
  double mx = 0.0;
  for (const auto& r : rep.records) mx = std::max(mx, r.ratio);
  CHECK(rep.max_ratio == mx);
}
