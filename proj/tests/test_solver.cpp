#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "dispersolve/errors.hpp"
#include "dispersolve/norms.hpp"
#include "dispersolve/solver.hpp"
#include "dispersolve/trajectory_io.hpp"
#include "test_helpers.hpp"
#include "waves.hpp"

using namespace dispersolve;
using namespace testing;

namespace {

SolverConfig base_config(SymbolSpec p, double alpha, Grid g, double dt, double t_end) {
  SolverConfig c;
  c.dispersion = std::move(p);
  c.alpha = alpha;
  c.grid = g;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

// Classical RK4 on the full equation (mean included), spectral derivatives,
// 2/3-rule product. Independent of the exponential integrators.
Field rk4_reference(const SolverConfig& c, const Field& u0, double dt, int steps) {
  const Grid& g = c.grid;
  auto rhs = [&](const Spectrum& s) {
    auto v = inverse_transform(g, s);
    for (double& x : v) x = x * x;
    Spectrum sq = transform(g, v);
    Spectrum out(g.half());
    for (int k = 0; k < g.half(); ++k) {
      const double xi = g.wavenumber(k);
      const Complex nl = k <= g.dealias_cutoff() ? Complex(0, -0.5 * xi) * sq[k] : 0.0;
      out[k] = Complex(0, -c.dispersion(xi)) * s[k] + nl;
    }
    return out;
  };
  Spectrum s = u0.spectrum();
  for (int k = g.dealias_cutoff() + 1; k < g.half(); ++k) s[k] = 0.0;
  auto axpy = [](const Spectrum& a, double h, const Spectrum& b) {
    Spectrum r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + h * b[i];
    return r;
  };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = rhs(s);
    const auto k2 = rhs(axpy(s, dt / 2, k1));
    const auto k3 = rhs(axpy(s, dt / 2, k2));
    const auto k4 = rhs(axpy(s, dt, k3));
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += dt / 6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return Field::from_spectrum(g, s);
}

SymbolSpec zero_symbol() {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    xs.push_back(10.0 * i);
    ys.push_back(0.0);
  }
  return SymbolSpec::tabulated(xs, ys, SymbolRole::Dispersion, 1.0, "zero");
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 64), 1e-2, 1);
  const auto traj = solve(c, Field::zeros(c.grid));
  REQUIRE(traj.completed());
  for (const auto& f : traj.snapshots) CHECK(max_abs(f.values()) == 0.0);
}

TEST_CASE("constant data is stationary") {
  const auto c = base_config(SymbolSpec::pure_power(1.5), 1.5, Grid(2 * kPi, 64), 1e-2, 1);
  const auto traj = solve(c, Field::from_function(c.grid, [](double) { return 0.7; }));
  REQUIRE(traj.completed());
  for (const auto& f : traj.snapshots) {
    for (double v : f.values()) CHECK(std::abs(v - 0.7) < 1e-15);
  }
}

TEST_CASE("tiny data follows the free evolution") {
  auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 64), 1e-2, 1);
  const auto u0 = Field::from_function(c.grid, [](double x) { return 1e-8 * std::cos(x); });
  const auto traj = solve(c, u0);
  REQUIRE(traj.completed());
  double dev = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto lin = linear_propagate(c, u0, traj.times[i]);
    dev = std::max(dev, max_diff(lin.values(), traj.snapshots[i].values()));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("KdV soliton translates at its speed") {
  const Grid g(40 * kPi, 1024);
  const auto p = SymbolSpec::kdv();
  const auto wave = kdv_soliton(1.0, 20 * kPi);
  const auto u0 = wave.at(g, 0);
  REQUIRE(travelling_residual(p, u0, wave.speed) < 1e-10);
  auto c = base_config(p, 2, g, 1e-3, 1);
  const auto traj = solve(c, u0);
  REQUIRE(traj.completed());
  CHECK(max_diff(traj.snapshots.back().values(), wave.at(g, 1).values()) < 1e-6);
}

TEST_CASE("periodic Benjamin-Ono wave translates at its speed") {
  const double length = 160 * kPi;
  const Grid g(length, 8192);
  const auto p = SymbolSpec::pure_power(1);
  const auto wave = bo_periodic_wave(length, 1.0, length / 2);
  const auto u0 = wave.at(g, 0);
  REQUIRE(travelling_residual(p, u0, wave.speed) < 1e-10);
  auto c = base_config(p, 1, g, 1e-3, 1);
  c.record_stride = 100;
  const auto traj = solve(c, u0);
  REQUIRE(traj.completed());
  CHECK(max_diff(traj.snapshots.back().values(), wave.at(g, 1).values()) < 1e-4);
}

TEST_CASE("mass and energy are conserved without dissipation") {
  for (double alpha : {1.0, 1.5, 2.0}) {
    auto c = base_config(SymbolSpec::pure_power(alpha), alpha, Grid(2 * kPi, 512), 1e-3, 1);
    const auto u0 = Field::from_function(
        c.grid, [](double x) { return 0.5 * std::cos(x) + 0.3 * std::sin(2 * x) + 0.1; });
    const auto traj = solve(c, u0);
    REQUIRE(traj.completed());
    const auto& d0 = traj.diagnostics.front();
    for (const auto& d : traj.diagnostics) {
      CHECK(std::abs(d.mass - d0.mass) <= 1e-8 * d0.mass);
      CHECK(std::abs(d.hamiltonian - d0.hamiltonian) <= 1e-6 * (std::abs(d0.hamiltonian) + 1));
      CHECK(d.tail_fraction < 1e-6);
    }
  }
}

TEST_CASE("both integrators agree") {
  auto c = base_config(SymbolSpec::smith(), 1, Grid(2 * kPi, 128), 1e-3, 0.5);
  const auto u0 = Field::from_function(c.grid, [](double x) { return std::sin(x) + 0.2 * std::cos(3 * x); });
  const auto a = solve(c, u0);
  c.integrator = Integrator::Lawson4;
  const auto b = solve(c, u0);
  CHECK(max_diff(a.snapshots.back().values(), b.snapshots.back().values()) < 1e-9);
}

TEST_CASE("mean-zero reduction") {
  const Grid g(2 * kPi, 64);
  const auto f = random_field(g, 8, 10);
  const auto [v0, m0] = mean_zero_reduce(f);
  CHECK(m0 == 0.0);
  CHECK(max_diff(v0.values(), f.values()) < 1e-15);

  const auto u0 = Field::from_function(g, [](double x) { return 1 + std::sin(x); });
  const auto [w0, m1] = mean_zero_reduce(u0);
  CHECK(std::abs(m1 - 1) < 1e-15);
  CHECK(max_diff(w0.values(), Field::from_function(g, [](double x) { return std::sin(x); }).values()) < 1e-15);

  auto c = base_config(SymbolSpec::pure_power(1), 1, g, 1e-3, 0.5);
  const auto traj = solve(c, u0);
  REQUIRE(traj.completed());
  CHECK(max_diff(traj.snapshots.front().values(), u0.values()) < 1e-12);
  const auto ref = rk4_reference(c, u0, 1e-4, 5000);
  CHECK(max_diff(traj.snapshots.back().values(), ref.values()) < 1e-9);
}

TEST_CASE("restoring the mean inverts the reduction at t = 0") {
  const Grid g(2 * kPi, 64);
  auto c = base_config(SymbolSpec::pure_power(1), 1, g, 1e-2, 1);
  const auto u0 = Field::from_values(g, [&] {
    auto v = random_field(g, 4, 12).values();
    for (double& x : v) x += 0.3;
    return v;
  }());
  const auto [v0, m0] = mean_zero_reduce(u0);
  Trajectory t;
  t.config = c;
  t.times = {0.0};
  t.snapshots = {v0};
  t.diagnostics = {Diagnostics{}};
  const auto back = mean_zero_restore(t, m0);
  CHECK(max_diff(back.snapshots[0].values(), u0.values()) < 1e-12);
}

TEST_CASE("integration is reversible with the negated symbol") {
  const Grid g(2 * kPi, 128);
  auto c = base_config(SymbolSpec::pure_power(1.5), 1.5, g, 1e-3, 1);
  const auto u0 = Field::from_function(g, [](double x) { return 0.4 * std::cos(x) + 0.2 * std::sin(2 * x); });
  const auto fwd = solve(c, u0);
  REQUIRE(fwd.completed());
  Spectrum neg = fwd.snapshots.back().spectrum();
  for (auto& z : neg) z = -z;
  auto back_cfg = c;
  back_cfg.dispersion = SymbolSpec::pure_power(1.5, -1);
  const auto bwd = solve(back_cfg, Field::from_spectrum(g, neg));
  REQUIRE(bwd.completed());
  std::vector<double> minus_u0 = u0.values();
  for (double& x : minus_u0) x = -x;
  CHECK(max_diff(bwd.snapshots.back().values(), minus_u0) < 1e-7);
}

TEST_CASE("fourth-order convergence in the time step") {
  const Grid g(2 * kPi, 128);
  auto c = base_config(SymbolSpec::kdv(), 2, g, 0.01, 1);
  const auto u0 = Field::from_function(g, [](double x) { return 0.5 * std::cos(x) + 0.25 * std::sin(2 * x); });
  auto at = [&](double dt) {
    c.dt = dt;
    c.record_stride = 1 << 20;
    const auto t = solve(c, u0);
    REQUIRE(t.completed());
    return t.snapshots.back().values();
  };
  const auto ref = at(0.01 / 8);
  const double e1 = max_diff(at(0.01), ref);
  const double e2 = max_diff(at(0.005), ref);
  INFO("errors " << e1 << " " << e2);
  CHECK(e1 / e2 >= 8 * 0.7);
}

TEST_CASE("heat equation decay") {
  auto c = base_config(zero_symbol(), 1, Grid(2 * kPi, 64), 1e-3, 0.5);
  c.dissipation = SymbolSpec::homogeneous(2);
  c.beta = 2;
  c.epsilon = 1;
  for (int k : {1, 3, 5}) {
    const double a = 1e-10;
    const auto u0 = Field::from_function(c.grid, [&](double x) { return a * std::cos(k * x); });
    const auto traj = dissipative_solve(c, u0);
    REQUIRE(traj.completed());
    for (std::size_t i = 0; i < traj.times.size(); i += 50) {
      const double t = traj.times[i];
      const double expected = a * std::exp(-k * k * t);
      const double got = traj.snapshots[i].spectrum()[k].real() * 2;
      CHECK(std::abs(got - expected) <= 1e-8 * expected);
    }
  }
}

TEST_CASE("dissipation makes the mass non-increasing") {
  auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 128), 1e-3, 1);
  c.dissipation = SymbolSpec::homogeneous(2);
  c.beta = 2;
  for (double eps : {1e-3, 1e-1, 1.0}) {
    c.epsilon = eps;
    const auto u0 = Field::from_function(c.grid, [](double x) { return std::cos(x) + 0.5 * std::sin(3 * x) + 0.2; });
    const auto traj = dissipative_solve(c, u0);
    REQUIRE(traj.completed());
    for (std::size_t i = 1; i < traj.diagnostics.size(); ++i) {
      CHECK(traj.diagnostics[i].mass <= traj.diagnostics[i - 1].mass * (1 + 1e-10));
    }
  }
}

TEST_CASE("zero viscosity reproduces the conservative run bitwise") {
  auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 64), 1e-2, 1);
  const auto u0 = random_field(c.grid, 5, 8);
  const auto a = solve(c, u0);
  c.dissipation = SymbolSpec::homogeneous(2);
  c.beta = 2;
  c.epsilon = 0;
  const auto b = solve(c, u0);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    CHECK(a.snapshots[i].values() == b.snapshots[i].values());
  }
  CHECK_THROWS_AS(dissipative_solve(c, u0), ArgumentError);
}

TEST_CASE("blowup and resolution loss abort with a partial trajectory") {
  // A steepening wave on a coarse grid loses resolution quickly.
  auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 32), 1e-3, 5);
  const auto u0 = Field::from_function(c.grid, [](double x) { return 20 * std::sin(x); });
  const auto traj = solve(c, u0);
  CHECK(traj.status == SolveStatus::ResolutionLoss);
  CHECK(traj.failure_time > 0);
  CHECK(traj.failure_time < 5);
  CHECK(!traj.snapshots.empty());
  CHECK(traj.times.back() <= traj.failure_time);

  c.max_amplitude = 1.0;
  const auto big = solve(c, Field::from_function(c.grid, [](double x) { return 2 * std::sin(x); }));
  CHECK(big.status == SolveStatus::Blowup);
  CHECK(big.failure_time == 0.0);
}

TEST_CASE("configuration validation") {
  auto c = base_config(SymbolSpec::pure_power(1), 1, Grid(2 * kPi, 64), 1e-2, 1);
  c.alpha = 2.5;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.alpha = 2;
  c.beta = 4;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.beta = 0;
  c.epsilon = 0.1;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.epsilon = 0;
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("recorded times and diagnostics") {
  auto c = base_config(SymbolSpec::ilw(), 1, Grid(2 * kPi, 64), 0.03, 1);
  c.record_stride = 4;
  const auto traj = solve(c, random_field(c.grid, 2, 6));
  REQUIRE(traj.completed());
  CHECK(traj.times.size() == traj.snapshots.size());
  CHECK(traj.times.size() == traj.diagnostics.size());
  CHECK(traj.times.back() == 1.0);
  for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  CHECK(std::abs(traj.dt_used - 1.0 / 34) < 1e-15);
}

TEST_CASE("trajectory file round trip") {
  auto c = base_config(SymbolSpec::pure_power(1.5), 1.5, Grid(2 * kPi, 64), 1e-2, 0.2);
  c.dissipation = SymbolSpec::inhomogeneous(1);
  c.beta = 1;
  c.epsilon = 0.01;
  c.seed = 77;
  const auto traj = solve(c, random_field(c.grid, 9, 8));
  const auto path = (std::filesystem::temp_directory_path() / "dispersolve_traj_test.bin").string();
  write_trajectory(path, traj);
  const auto back = read_trajectory(path);
  std::filesystem::remove(path);
  CHECK(back.config.dispersion.to_string() == c.dispersion.to_string());
  CHECK(back.config.dissipation->to_string() == c.dissipation->to_string());
  CHECK(back.config.epsilon == c.epsilon);
  CHECK(back.config.seed == 77);
  CHECK(back.times == traj.times);
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    CHECK(back.snapshots[i].values() == traj.snapshots[i].values());
    CHECK(back.diagnostics[i].mass == traj.diagnostics[i].mass);
  }
}
