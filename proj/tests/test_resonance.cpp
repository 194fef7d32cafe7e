#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "dispersolve/errors.hpp"
#include "dispersolve/resonance_test.hpp"

using namespace dispersolve;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

HypothesisCertificate quadrant_certificate(const SymbolSpec& p, double alpha) {
  CertificateRegion r;
  r.positive_quadrant = true;
  r.shape = RegionShape::BothLarge;
  return certify_hypothesis1(p, alpha, r);
}

bool in_n_band(double n, double xi) {
  const double a = std::abs(xi);
  return a >= n / kSqrt2 && a < kSqrt2 * n;
}

bool in_l_band(double l, double sigma) {
  const double a = std::abs(sigma);
  return l == 0.0 ? a < 1.0 / kSqrt2 : (a >= l / kSqrt2 && a < kSqrt2 * l);
}

/// Brute-force count of lattice points (k_i, j_i), summing to zero in both
/// coordinates, with every (xi, sigma) in its band.
long admissible_points(const ResonanceTriple& t, const SymbolSpec& p,
                       const ResonanceTestOptions& o) {
  const double unit = 2.0 * std::numbers::pi / o.length;
  std::array<std::set<std::pair<long, long>>, 3> support;
  for (int i = 0; i < 3; ++i) {
    const long kmax = static_cast<long>(2.0 * t.n[i] / unit) + 2;
    for (long k = -kmax; k <= kmax; ++k) {
      const double xi = k * unit;
      if (!in_n_band(t.n[i], xi)) continue;
      const double c = p(xi);
      const double reach = (t.l[i] == 0.0 ? 1.0 : 2.0 * t.l[i]) + 2.0 * o.dtau;
      for (long j = static_cast<long>(std::floor((c - reach) / o.dtau));
           j <= static_cast<long>(std::ceil((c + reach) / o.dtau)); ++j) {
        if (in_l_band(t.l[i], j * o.dtau - c)) support[i].insert({k, j});
      }
    }
  }
  long count = 0;
  for (const auto& [k1, j1] : support[0]) {
    for (const auto& [k2, j2] : support[1]) {
      if (support[2].count({-k1 - k2, -j1 - j2})) ++count;
    }
  }
  return count;
}

}  // namespace

TEST_CASE("classification uses the widened certificate constants") {
  const auto p = SymbolSpec::pure_power(1.0);
  const auto cert = quadrant_certificate(p, 1.0);
  // scale max(N1 N2, L_med); compatible band [c_min/4, 4 c_max] * scale
  CHECK(classify_triple({{1, 1, 2}, {0, 0, 0}}, cert, 1.0) == TripleClass::Violating);
  CHECK(classify_triple({{1, 1, 2}, {0, 0, 2}}, cert, 1.0) == TripleClass::Compatible);
  CHECK(classify_triple({{2, 8, 8}, {0, 0, 16}}, cert, 1.0) == TripleClass::Compatible);
  CHECK(classify_triple({{2, 8, 8}, {0, 0, 256}}, cert, 1.0) == TripleClass::Violating);
  // L_med dominates: (64, 64) forces L_max ~ 64
  CHECK(classify_triple({{1, 1, 2}, {0, 64, 64}}, cert, 1.0) == TripleClass::Compatible);
}

TEST_CASE("support test: integral vanishes exactly when no lattice point is admissible") {
  const auto p = SymbolSpec::pure_power(1.0);
  const auto cert = quadrant_certificate(p, 1.0);
  ResonanceTestOptions o;
  o.trials = 3;
  const std::vector<ResonanceTriple> triples{
      {{1, 1, 2}, {0, 0, 0}},  {{1, 1, 2}, {0, 0, 2}}, {{1, 2, 4}, {0, 0, 4}},
      {{1, 4, 4}, {0, 0, 8}},  {{1, 4, 4}, {1, 0, 4}}, {{2, 2, 4}, {0, 4, 16}},
      {{1, 2, 2}, {0, 0, 64}}, {{2, 4, 8}, {1, 1, 16}}};
  int empty = 0, occupied = 0;
  for (const auto& t : triples) {
    const auto r = resonance_support_test(t, p, &cert, 1.0, o);
    const long pts = admissible_points(t, p, o);
    ++(pts == 0 ? empty : occupied);
    INFO("N = " << t.n[0] << "," << t.n[1] << "," << t.n[2] << "  L = " << t.l[0] << ","
                << t.l[1] << "," << t.l[2] << "  points = " << pts);
    if (pts == 0) {
      CHECK(r.max_normalized == 0.0);
      CHECK(r.first_witness_trial == -1);
    } else {
      CHECK(r.first_witness_trial >= 0);
      CHECK_FALSE(r.provably_zero);
    }
  }
  CHECK(empty > 0);
  CHECK(occupied > 0);
}

TEST_CASE("omega range matches a direct scan of the frequency bands") {
  const auto p = SymbolSpec::kdv();
  HypothesisCertificate cert = certify_hypothesis1(p, 2.0, CertificateRegion{});
  const ResonanceTriple t{{2, 4, 4}, {0, 0, 64}};
  const auto r = resonance_support_test(t, p, &cert, 2.0, {.trials = 1});
  double lo = INFINITY, hi = 0.0;
  for (int k1 = 1; k1 <= 3; ++k1) {
    for (int k2 = -6; k2 <= 6; ++k2) {
      if (!in_n_band(2, k1) || !in_n_band(4, k2) || !in_n_band(4, k1 + k2)) continue;
      const double om = std::abs(3.0 * k1 * k2 * (k1 + k2));  // KdV factorization
      lo = std::min(lo, om);
      hi = std::max(hi, om);
    }
  }
  CHECK(r.omega_min == Catch::Approx(lo));
  CHECK(r.omega_max == Catch::Approx(hi));
}

TEST_CASE("support test requires a certificate and ordered scales") {
  const auto p = SymbolSpec::pure_power(1.0);
  CHECK_THROWS_AS(resonance_support_test({{1, 1, 2}, {0, 0, 0}}, p, nullptr, 1.0),
                  PreconditionError);
  const auto cert = quadrant_certificate(p, 1.0);
  CHECK_THROWS_AS(resonance_support_test({{4, 1, 2}, {0, 0, 0}}, p, &cert, 1.0), ArgumentError);
}

TEST_CASE("support test is reproducible for a fixed seed") {
  const auto p = SymbolSpec::pure_power(1.0);
  const auto cert = quadrant_certificate(p, 1.0);
  ResonanceTestOptions o;
  o.trials = 4;
  o.witness_threshold = 1e300;  // run every trial
  const ResonanceTriple t{{1, 4, 4}, {0, 0, 8}};
  const auto a = resonance_support_test(t, p, &cert, 1.0, o);
  const auto b = resonance_support_test(t, p, &cert, 1.0, o);
  CHECK(a.max_normalized == b.max_normalized);
  CHECK(a.trials_run == 4);
  o.seed = 2;
  const auto c = resonance_support_test(t, p, &cert, 1.0, o);
  CHECK(c.max_normalized != a.max_normalized);
}
