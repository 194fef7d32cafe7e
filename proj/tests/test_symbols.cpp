#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/random.hpp"
#include "dispersolve/symbols.hpp"

using namespace dispersolve;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed-form dispersion values") {
  CHECK(eval_dispersion(SymbolSpec::pure_power(1.0), 2.0) == 4.0);
  CHECK(eval_dispersion(SymbolSpec::ilw(), 0.0) == 0.0);
  CHECK_THAT(eval_dispersion(SymbolSpec::smith(), 1.0), WithinRel(std::sqrt(2.0), 1e-15));
  CHECK(eval_dispersion(SymbolSpec::kdv(), 2.0) == -8.0);
  // ILW against the direct formula away from the series branch
  for (double x : {1e-3, 0.1, 1.0, 5.0}) {
    CHECK_THAT(eval_dispersion(SymbolSpec::ilw(), x), WithinRel(x * x / std::tanh(x), 1e-14));
  }
  // series branch vs high-precision value of xi^2 coth xi at 5e-5
  const double x = 5e-5;
  CHECK_THAT(eval_dispersion(SymbolSpec::ilw(), x), WithinRel(x * (1.0 + x * x / 3.0), 1e-15));
}

TEST_CASE("dissipation values") {
  CHECK(eval_dissipation(SymbolSpec::homogeneous(2.0), -3.0) == 9.0);
  CHECK(eval_dissipation(SymbolSpec::inhomogeneous(0.0), 7.0) == 1.0);
  CHECK_THAT(eval_dissipation(SymbolSpec::inhomogeneous(1.0), 1.0), WithinRel(std::sqrt(2.0), 1e-15));
  CHECK_THROWS_AS(eval_dissipation(SymbolSpec::kdv(), 1.0), ArgumentError);
  CHECK_THROWS_AS(eval_dispersion(SymbolSpec::homogeneous(1.0), 1.0), ArgumentError);
}

TEST_CASE("resonance examples") {
  CHECK(resonance(SymbolSpec::pure_power(1.0), 1.0, 1.0) == 2.0);
  // KdV: direct evaluation -27 + 1 + 8
  CHECK_THAT(resonance(SymbolSpec::kdv(), 1.0, 2.0), WithinAbs(-18.0, 1e-12));
  for (const auto& s : {SymbolSpec::pure_power(1.5), SymbolSpec::ilw(), SymbolSpec::smith(),
                        SymbolSpec::kdv()}) {
    CHECK(resonance(s, 3.7, -3.7) == 0.0);
  }
}

TEST_CASE("symbol invariants on random samples") {
  Rng rng(7);
  const std::vector<SymbolSpec> specs = {SymbolSpec::pure_power(1.0), SymbolSpec::pure_power(1.5),
                                         SymbolSpec::pure_power(1.3, -1), SymbolSpec::kdv(),
                                         SymbolSpec::ilw(), SymbolSpec::smith()};
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform(-50, 50), b = rng.uniform(-50, 50);
    for (const auto& s : specs) {
      CHECK(eval_dispersion(s, -a) == -eval_dispersion(s, a));
      const double r = resonance(s, a, b);
      CHECK_THAT(resonance(s, -a, -b), WithinRel(-r, 1e-12));
    }
    // KdV factorization: Omega = -3 xi1 xi2 (xi1 + xi2)
    const double kdv = resonance(SymbolSpec::kdv(), a, b);
    const double fact = -3.0 * a * b * (a + b);
    CHECK(std::abs(kdv - fact) <= 1e-10 * std::abs(fact) + 1e-300);
    if (a > 0 && b > 0) {
      CHECK(resonance(SymbolSpec::pure_power(1.0), a, b) == 2.0 * a * b);
    }
    for (const double q : {0.5, 1.0, 2.0}) {
      const auto d = SymbolSpec::homogeneous(q), j = SymbolSpec::inhomogeneous(q);
      CHECK(eval_dissipation(d, -a) == eval_dissipation(d, a));
      CHECK(eval_dissipation(j, -a) == eval_dissipation(j, a));
      CHECK(eval_dissipation(d, a) >= 0.0);
    }
  }
}

TEST_CASE("resonance avoids cancellation for a tiny partner frequency") {
  // Omega(x, y) ~ 2 x y for BO-type, 3 x^2 y for KdV-type as y -> 0
  const double x = 1e6, y = 1e-6;
  CHECK_THAT(resonance(SymbolSpec::pure_power(1.0), x, y), WithinRel(2 * x * y, 1e-12));
  CHECK_THAT(resonance(SymbolSpec::kdv(), x, y), WithinRel(-3 * x * y * (x + y), 1e-12));
  // general alpha: Omega = p(x+y) - p(x) - p(y) with p' = (a+1) x^a
  const double alpha = 1.5;
  const double expect = (alpha + 1) * std::pow(x, alpha) * y;
  CHECK_THAT(resonance(SymbolSpec::pure_power(alpha), x, y), WithinRel(expect, 1e-6));
  // Smith and ILW against long-double evaluation at moderate size
  for (const double a : {3.0, 20.0, 200.0}) {
    const double b = 1e-3 * a;
    const long double la = a, lb = b;
    auto smith = [](long double v) { return v * std::sqrt(v * v + 1.0L); };
    auto ilw = [](long double v) { return v * v / std::tanh(v); };
    const long double es = smith(la + lb) - smith(la) - smith(lb);
    const long double ei = ilw(la + lb) - ilw(la) - ilw(lb);
    CHECK_THAT(resonance(SymbolSpec::smith(), a, b), WithinRel(static_cast<double>(es), 1e-9));
    CHECK_THAT(resonance(SymbolSpec::ilw(), a, b), WithinRel(static_cast<double>(ei), 1e-9));
  }
}

TEST_CASE("hypothesis certificate for the quadratic symbol matches the closed form") {
  CertificateRegion r;
  r.xi1_min = 8;
  r.xi1_max = 1e12;
  r.xi2_min = 1;
  r.xi2_max = 1e12;
  r.positive_quadrant = true;
  r.samples_per_axis = 24;
  const auto cert = certify_hypothesis1(SymbolSpec::pure_power(1.0), 1.0, r);
  // oracle: on the positive quadrant the ratio is 2 max / (xi1 + xi2)
  double lo = 1e300, hi = -1e300;
  const int n = r.samples_per_axis;
  for (int i = 0; i < n; ++i) {
    const double a = std::exp(std::log(8.0) + (std::log(1e12) - std::log(8.0)) * i / (n - 1));
    for (int j = 0; j < n; ++j) {
      const double b = std::exp(std::log(1e12) * j / (n - 1));
      const double v = 2.0 * std::max(a, b) / (a + b);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK_THAT(cert.ratio_min, WithinAbs(lo, 1e-9));
  CHECK_THAT(cert.ratio_max, WithinAbs(hi, 1e-9));
  CHECK_THAT(cert.ratio_min, WithinAbs(1.0, 1e-9));
  CHECK_THAT(cert.ratio_max, WithinAbs(2.0, 1e-9));
  CHECK(cert.certified);
}

TEST_CASE("Smith and ILW are certified on the default region") {
  CertificateRegion r;  // [8,1024] x [8,1024], lambda in [1/64, 1], all quadrants
  for (const auto& s : {SymbolSpec::smith(), SymbolSpec::ilw()}) {
    const auto c = certify_hypothesis1(s, 1.0, r);
    CHECK(c.certified);
    CHECK(c.ratio_min > 1e-3);
    CHECK(c.ratio_min <= c.ratio_max);
    CHECK(c.excluded > 0);  // xi2 = -xi1 diagonal points
  }
}

TEST_CASE("certificate bounds widen with the region") {
  CertificateRegion small;
  small.xi1_max = small.xi2_max = 64;
  small.samples_per_axis = 9;
  CertificateRegion big = small;
  big.xi1_max = big.xi2_max = 4096;
  big.samples_per_axis = 17;  // contains the small grid: log-spaced with 2x density
  for (const auto& s : {SymbolSpec::smith(), SymbolSpec::pure_power(1.5)}) {
    const auto a = certify_hypothesis1(s, s.order(), small);
    const auto b = certify_hypothesis1(s, s.order(), big);
    CHECK(b.ratio_min <= a.ratio_min * (1 + 1e-12));
    CHECK(b.ratio_max >= a.ratio_max * (1 - 1e-12));
  }
}

TEST_CASE("certificate region validation") {
  CertificateRegion r;
  r.xi1_min = 2;
  CHECK_THROWS_AS(certify_hypothesis1(SymbolSpec::smith(), 1, r), ArgumentError);
  r = {};
  r.lambda_max = 2;
  CHECK_THROWS_AS(certify_hypothesis1(SymbolSpec::smith(), 1, r), ArgumentError);
  r = {};
  r.xi1_max = 1;
  CHECK_THROWS_AS(certify_hypothesis1(SymbolSpec::smith(), 1, r), ArgumentError);
}

TEST_CASE("derivative criterion") {
  const auto kdv = check_lemma21(SymbolSpec::pure_power(2.0, -1), 2.0, 8, 1024, 50);
  CHECK(kdv.first_min == 3.0);
  CHECK(kdv.first_max == 3.0);
  const auto bo = check_lemma21(SymbolSpec::pure_power(1.0), 1.0, 8, 1024, 50);
  CHECK(bo.second_min == 2.0);
  CHECK(bo.second_max == 2.0);
  const auto ilw = check_lemma21(SymbolSpec::ilw(), 1.0, 8, 512, 64);
  CHECK(ilw.first_min >= 0.5);
  CHECK(ilw.first_max <= 3.0);
  CHECK(ilw.second_min >= 0.5);
  CHECK(ilw.second_max <= 3.0);
  // closed form against finite differences
  for (const auto& s : {SymbolSpec::ilw(), SymbolSpec::smith(), SymbolSpec::pure_power(1.5)}) {
    const auto a = check_lemma21(s, 1.0, 8, 512, 16, DerivativeMethod::ClosedForm);
    const auto b = check_lemma21(s, 1.0, 8, 512, 16, DerivativeMethod::FiniteDifference);
    CHECK_THAT(a.first_min, WithinRel(b.first_min, 1e-6));
    CHECK_THAT(a.second_max, WithinRel(b.second_max, 1e-4));
  }
}

TEST_CASE("tabulated symbols") {
  std::vector<double> xi, v;
  for (int i = 0; i <= 400; ++i) {
    xi.push_back(i * 0.5);
    v.push_back(xi.back() * xi.back());
  }
  const auto t = SymbolSpec::tabulated(xi, v, SymbolRole::Dispersion, 1.0);
  CHECK_THAT(t(3.0), WithinRel(9.0, 1e-12));
  CHECK(t(-3.0) == -t(3.0));
  CHECK_THROWS_AS(t(250.0), OutOfRangeError);
  CHECK_THROWS_AS(resonance(t, 150.0, 150.0), OutOfRangeError);
  // coarse table: second differences are not resolved
  const auto coarse = SymbolSpec::tabulated({0, 10, 20, 40, 80}, {0, 100, 400, 1600, 6400},
                                            SymbolRole::Dispersion, 1.0);
  CHECK_THROWS_AS(check_lemma21(coarse, 1.0, 8, 60, 8), ResolutionError);
  CHECK_THROWS_AS(SymbolSpec::tabulated({0, 1, 2}, {0, 1, 4}, SymbolRole::Dispersion, 1.0),
                  ArgumentError);

  const auto path = std::filesystem::temp_directory_path() / "dispersolve_table.txt";
  {
    std::ofstream out(path);
    out << "# xi value\n";
    for (std::size_t i = 0; i < xi.size(); ++i) out << xi[i] << ' ' << v[i] << '\n';
  }
  const auto loaded = SymbolSpec::parse("table:path=" + path.string(), SymbolRole::Dispersion);
  CHECK_THAT(loaded(7.25), WithinRel(t(7.25), 1e-15));
  std::filesystem::remove(path);
}

TEST_CASE("symbol text round trip") {
  for (const char* text : {"purepower:alpha=1.5", "purepower:alpha=2,sign=-1", "kdv", "ilw", "smith"}) {
    const auto s = SymbolSpec::parse(text, SymbolRole::Dispersion);
    CHECK(SymbolSpec::parse(s.to_string(), SymbolRole::Dispersion).to_string() == s.to_string());
  }
  CHECK(SymbolSpec::parse("D:beta=2", SymbolRole::Dissipation).to_string() == "D:beta=2");
  CHECK_THROWS_AS(SymbolSpec::parse("purepower:alpha=1,gamma=2", SymbolRole::Dispersion), ArgumentError);
  CHECK_THROWS_AS(SymbolSpec::parse("kdv", SymbolRole::Dissipation), ArgumentError);
  CHECK_THROWS_AS(SymbolSpec::parse("bogus", SymbolRole::Dispersion), ArgumentError);
}
