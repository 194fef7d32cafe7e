#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dispersolve/config.hpp"
#include "dispersolve/errors.hpp"

using namespace dispersolve;
using Catch::Matchers::ContainsSubstring;

namespace {

bool defaulted(const RunConfig& c, const std::string& key) {
  return std::find(c.defaulted.begin(), c.defaulted.end(), key) != c.defaulted.end();
}

}  // namespace

TEST_CASE("empty text takes every default and records them") {
  const auto c = parse_config("");
  CHECK(c.experiment == "solve");
  CHECK(c.n == 64);
  CHECK(c.length == 2 * std::numbers::pi);
  CHECK(c.alpha == 1.0);
  CHECK(defaulted(c, "grid.n"));
  CHECK(defaulted(c, "equation.alpha"));
  const auto s = serialize(c);
  CHECK_THAT(s, ContainsSubstring("n = 64"));
}

TEST_CASE("experiment defaults fill the parameter map") {
  const auto c = parse_config(R"(
[equation]
dispersion = "purepower:alpha=1"
dissipation = "D:beta=2"
[experiment]
name = "diss-limit"
min_order = 0.9
)");
  CHECK(c.number("min_order") == 0.9);
  CHECK(c.number("fit_points") == 3);
  CHECK(c.numbers("epsilons").size() == 4);
  CHECK(defaulted(c, "experiment.epsilons"));
  CHECK_FALSE(defaulted(c, "experiment.min_order"));
  CHECK(c.beta == 2);
}

TEST_CASE("alpha and beta follow the symbol orders") {
  const auto c = parse_config("[equation]\ndispersion = \"kdv\"\n");
  CHECK(c.alpha == 2.0);
  CHECK_THROWS_WITH(parse_config("[equation]\ndispersion = \"kdv\"\nalpha = 1.5\n"),
                    ContainsSubstring("equation.alpha"));
}

TEST_CASE("dissipation order above 1 + alpha is rejected") {
  const std::string text = R"(
[equation]
dispersion = "kdv"
dissipation = "D:beta=4"
epsilon = 0.1
)";
  CHECK_THROWS_AS(parse_config(text), ConfigError);
  CHECK_THROWS_WITH(parse_config(text), ContainsSubstring("beta <= 1 + alpha"));
  CHECK_NOTHROW(parse_config("[equation]\ndispersion = \"kdv\"\ndissipation = \"D:beta=3\"\n"));
}

TEST_CASE("duplicate keys cite both lines") {
  const std::string text = "[grid]\nn = 64\nlength = 1\nn = 128\n";
  CHECK_THROWS_WITH(parse_config(text),
                    ContainsSubstring("grid.n at lines 2 and 4"));
  CHECK_THROWS_AS(parse_config("[grid]\n[grid]\n"), ConfigError);
}

TEST_CASE("unknown keys, sections and type mismatches are errors") {
  CHECK_THROWS_WITH(parse_config("[grid]\nm = 3\n"), ContainsSubstring("grid.m"));
  CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
  CHECK_THROWS_WITH(parse_config("[grid]\nn = \"64\"\n"), ContainsSubstring("line 2"));
  CHECK_THROWS_AS(parse_config("[grid]\nn = 64.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 48\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[equation]\ndealias = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = \"scaling-test\"\nlambdas = [0.5, \"x\"]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = \"solve\"\nlambdas = [0.5]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = \"warp\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\ninitial = \"sawtooth:a=1\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[equation]\nepsilon = 0.1\n"), ConfigError);
}

TEST_CASE("length accepts multiples of pi") {
  CHECK(parse_config("[grid]\nlength = \"160pi\"\n").length == 160 * std::numbers::pi);
  CHECK(parse_config("[grid]\nlength = 3.5\n").length == 3.5);
  CHECK_THROWS_AS(parse_config("[grid]\nlength = \"tau\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nlength = -1\n"), ConfigError);
}

TEST_CASE("comments, strings and arrays") {
  const auto c = parse_config(R"(
seed = 18446744073709551615  # max uint64
[experiment]
name = "bona-smith" # trailing
profile = "gaussian"
cutoffs = [8, 16, 32,]
[output]
formats = ["json"]
directory = "a#b"
)");
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.text("profile") == "gaussian");
  CHECK(c.directory == "a#b");
  CHECK(c.formats == std::vector<std::string>{"json"});
  CHECK(c.numbers("cutoffs") == std::vector<double>{8, 16, 32});
  CHECK_THROWS_AS(parse_config("[experiment]\nname = \"bona-smith\"\ncutoffs = [8,\n"),
                  ConfigError);
}

TEST_CASE("meter axes are validated against the chosen meter") {
  const auto c = parse_config(R"(
[experiment]
name = "meter"
meter = "lemma24"
T = [0.5, 1]
)");
  CHECK(c.numbers("T") == std::vector<double>{0.5, 1});
  CHECK_THROWS_AS(parse_config("[experiment]\nname = \"meter\"\nmeter = \"lemma24\"\nN = [4]\n"),
                  ConfigError);
}

TEST_CASE("serialize is a fixed point of parse") {
  const std::vector<std::string> texts{
      "",
      "seed = 9\n[equation]\ndispersion = \"ilw\"\n[grid]\nlength = \"4pi\"\nn = 256\n",
      "[equation]\ndispersion = \"purepower:alpha=1\"\ndissipation = \"D:beta=2\"\n"
      "[experiment]\nname = \"diss-limit\"\nepsilons = [0.1, 0.03, 0.01, 0.001]\nhorizon = 0.3\n",
      "[experiment]\nname = \"resonance-test\"\nviolating = 3\n",
      "[experiment]\nname = \"meter\"\nmeter = \"commutator\"\ns = [0, 1]\n",
      "[time]\ndt = 0.1\nt_end = 0.30000000000000004\n"};
  for (const auto& t : texts) {
    const auto a = parse_config(t);
    const auto text = serialize(a);
    const auto b = parse_config(text);
    CHECK(a == b);
    CHECK(serialize(b) == text);
  }
  CHECK(parse_config(texts[5]).t_end == 0.30000000000000004);
}

TEST_CASE("solver configuration mirrors the run configuration") {
  const auto c = parse_config(
      "[equation]\ndispersion = \"kdv\"\nintegrator = \"lawson4\"\n[grid]\nn = 128\n[time]\ndt = 0.01\n");
  const auto s = solver_config(c);
  CHECK(s.grid.n() == 128);
  CHECK(s.dt == 0.01);
  CHECK(s.alpha == 2.0);
  CHECK(s.integrator == Integrator::Lawson4);
  CHECK_FALSE(s.dissipation.has_value());
}
