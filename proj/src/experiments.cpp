#include "dispersolve/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "dispersolve/errors.hpp"
#include "dispersolve/lp_toolkit.hpp"
#include "dispersolve/norms.hpp"
#include "dispersolve/random.hpp"
#include "format.hpp"
#include "keyvalue.hpp"
#include "work_pool.hpp"

namespace dispersolve {

using detail::format_double;

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                  std::string name) {
  if (x.size() != y.size()) throw ArgumentError("least_squares: size mismatch");
  if (x.size() < 2) throw ArgumentError("least_squares: needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("least_squares: abscissae coincide");
  Fit f;
  f.name = std::move(name);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.points = static_cast<int>(x.size());
  return f;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

double ExperimentResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw ArgumentError("experiment '" + name + "' has no summary value '" + key + "'");
}

namespace {

constexpr double kPi = std::numbers::pi;

Field difference(const Field& a, const Field& b) {
  Spectrum d = a.spectrum();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] -= b.spectrum()[k];
  return Field::from_spectrum(a.grid(), std::move(d));
}

Field scaled(const Field& f, double c) {
  Spectrum s = f.spectrum();
  for (auto& z : s) z *= c;
  return Field::from_spectrum(f.grid(), std::move(s));
}

std::string abort_note(const std::string& what, const Trajectory& t) {
  return "solve aborted (" + what + "): " + to_string(t.status) + " at t = " +
         format_double(t.failure_time) + ": " + t.failure_message;
}

/// max over the common recorded times t <= horizon of ||a(t) - b(t)||_{H^s}.
double max_distance(const Trajectory& a, const Trajectory& b, double s,
                    double horizon = INFINITY) {
  const std::size_t count = std::min(a.snapshots.size(), b.snapshots.size());
  double d = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (a.times[i] > horizon * (1.0 + 1e-12)) break;
    d = std::max(d, sobolev(difference(a.snapshots[i], b.snapshots[i]), s));
  }
  return d;
}

}  // namespace

Field rough_data(const Grid& grid, double s, double delta, std::uint64_t seed,
                 double amplitude) {
  constexpr double kGolden = 0.6180339887498949;
  Rng rng(seed);
  const double theta0 = rng.uniform();
  Spectrum spec(grid.half());
  for (int k = 1; k < grid.n() / 2; ++k) {
    const double phase = 2.0 * kPi * std::fmod(theta0 + k * kGolden, 1.0);
    const double mag = amplitude * std::pow(bracket(grid.wavenumber(k)), -s - 0.5 - delta);
    spec[k] = std::polar(mag, phase);
  }
  return Field::from_spectrum(grid, std::move(spec));
}

Field initial_field(std::string_view spec, const Grid& grid, std::uint64_t seed) {
  const auto kv = detail::parse_key_values(spec);
  const double length = grid.length();
  const double x0 = kv.number("x0", length / 2.0);
  if (kv.name == "fourier") {
    std::vector<std::pair<int, std::pair<bool, double>>> terms;
    for (const auto& [key, value] : kv.params) {
      if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b')) {
        throw ArgumentError("fourier: unknown parameter '" + key + "'");
      }
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(key.substr(1), &used);
        if (used != key.size() - 1 || k < 0) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ArgumentError("fourier: bad mode index in '" + key + "'");
      }
      if (2 * k >= grid.n()) throw ArgumentError("fourier: mode " + key + " beyond the grid");
      terms.push_back({k, {key[0] == 'a', kv.to_double(value, key)}});
    }
    return Field::from_function(grid, [&](double x) {
      const double y = 2.0 * kPi * x / length;
      double v = 0.0;
      for (const auto& [k, t] : terms) {
        v += t.second * (t.first ? std::cos(k * y) : std::sin(k * y));
      }
      return v;
    });
  }
  if (kv.name == "soliton") {
    kv.only("c", "x0");
    const double c = kv.number("c");
    if (!(c > 0.0)) throw ArgumentError("soliton: c must be > 0");
    return Field::from_function(grid, [&](double x) {
      const double r = 1.0 / std::cosh(std::sqrt(c) * (x - x0) / 2.0);
      return 3.0 * c * r * r;
    });
  }
  if (kv.name == "bo-wave") {
    kv.only("width", "x0");
    const double width = kv.number("width");
    if (!(width > 0.0)) throw ArgumentError("bo-wave: width must be > 0");
    const double k = 2.0 * kPi / length;
    const double g = k / width;
    return Field::from_function(grid, [&](double x) {
      const double a = std::sinh(g / 2.0);
      const double b = std::sin(k * (x - x0) / 2.0);
      return -k * std::sinh(g) / (a * a + b * b);
    });
  }
  if (kv.name == "gaussian") {
    kv.only("a", "width", "x0");
    const double a = kv.number("a", 1.0);
    const double w = kv.number("width", 1.0);
    if (!(w > 0.0)) throw ArgumentError("gaussian: width must be > 0");
    return Field::from_function(grid, [&](double x) {
      const double z = (x - x0) / w;
      return a * std::exp(-z * z);
    });
  }
  if (kv.name == "rough") {
    kv.only("s", "delta", "amplitude");
    return rough_data(grid, kv.number("s", 0.0), kv.number("delta", 0.05), seed,
                      kv.number("amplitude", 1.0));
  }
  if (kv.name == "file") {
    kv.only("path");
    Snapshot snap = read_field(kv.text("path"));
    if (!(snap.field.grid() == grid)) {
      throw ArgumentError("file: field grid differs from the configured grid");
    }
    return snap.field;
  }
  throw ArgumentError("unknown initial data family '" + kv.name + "'");
}

// ---------------------------------------------------------------------------

ExperimentResult dissipative_limit(const SolverConfig& base, const Field& u0,
                                   const DissipativeLimitOptions& opt) {
  const auto& eps = opt.epsilons;
  if (eps.size() < 4) throw ArgumentError("dissipative_limit: needs at least 4 epsilons");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] >= 0.0 && eps[i] <= 1.0)) {
      throw ArgumentError("dissipative_limit: epsilons must lie in [0, 1]");
    }
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw ArgumentError("dissipative_limit: epsilons must be strictly descending");
    }
  }
  if (!base.dissipation) throw ArgumentError("dissipative_limit: no dissipation symbol");
  if (opt.fit_points < 3) throw ArgumentError("dissipative_limit: fit_points must be >= 3");

  ExperimentResult r;
  r.name = "diss-limit";
  r.seed = base.seed;
  r.thresholds = {{"min_order", opt.min_order}, {"fit_points", double(opt.fit_points)}};

  // Task 0 is the eps = 0 reference.
  auto runs = detail::parallel_map<Trajectory>(eps.size() + 1, [&](std::size_t i) {
    SolverConfig c = base;
    c.epsilon = i == 0 ? 0.0 : eps[i - 1];
    return solve(c, u0);
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].completed()) {
      r.solver_abort = true;
      r.notes.push_back(abort_note(
          "epsilon = " + format_double(i == 0 ? 0.0 : eps[i - 1]), runs[i]));
    }
  }
  if (r.solver_abort) {
    r.verdict = Verdict::Fail;
    return r;
  }

  double horizon = base.t_end / 2.0;
  if (opt.horizon) {
    if (!(*opt.horizon > 0.0)) throw ArgumentError("dissipative_limit: horizon must be > 0");
    horizon = std::min(*opt.horizon, base.t_end);
  }
  r.summary.push_back({"horizon", horizon});

  ResultTable table{"distance", {"epsilon", "D"},
                    {"dissipation coefficient",
                     "max over recorded t <= horizon of the H^s distance to the epsilon = 0 run"},
                    {}};
  std::vector<double> d(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    d[i] = max_distance(runs[i + 1], runs[0], opt.s, horizon);
    table.rows.push_back({eps[i], d[i]});
  }
  r.tables.push_back(std::move(table));

  bool monotone = true;
  for (std::size_t i = 1; i < d.size(); ++i) monotone = monotone && d[i] < d[i - 1];
  r.summary.push_back({"monotone", monotone ? 1.0 : 0.0});

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] > 0.0 && d[i] > 0.0) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(d[i]));
    }
  }
  if (lx.size() < 3) {
    r.notes.push_back("fewer than 3 nonzero distances; no order fitted");
    r.verdict = Verdict::Inconclusive;
    return r;
  }
  const std::size_t keep = std::min<std::size_t>(lx.size(), opt.fit_points);
  Fit fit = least_squares({lx.end() - keep, lx.end()}, {ly.end() - keep, ly.end()},
                          "order: log D against log epsilon");
  r.summary.push_back({"order", fit.slope});
  r.summary.push_back({"order_residual", fit.residual});
  r.fits.push_back(fit);
  r.verdict = monotone && fit.slope >= opt.min_order ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// The field lambda^a f(lambda x) on the grid of length L / lambda with n / lambda
/// points: index k keeps its index.
Field dilate(const Field& f, const Grid& target, double factor) {
  Spectrum s(target.half());
  for (int k = 0; k < f.grid().half() && k < target.half(); ++k) {
    s[k] = factor * f.spectrum()[k];
  }
  return Field::from_spectrum(target, std::move(s));
}

}  // namespace

ExperimentResult scaling_check(const SolverConfig& base, const Field& u0,
                               const ScalingOptions& opt) {
  if (!base.dispersion.is_pure_power()) {
    throw ArgumentError("scaling_check: unsupported symbol " + base.dispersion.to_string() +
                        " (only pure powers are invariant under the scaling)");
  }
  if (base.epsilon != 0.0) throw ArgumentError("scaling_check: requires epsilon = 0");
  if (opt.lambdas.empty()) throw ArgumentError("scaling_check: no lambdas");
  const double a = base.dispersion.order();

  // Common starting point: the data as the base run sees them.
  Spectrum s0 = u0.spectrum();
  const Grid& g = base.grid;
  for (int k = (base.dealias ? g.dealias_cutoff() + 1 : g.n() / 2); k < g.half(); ++k) {
    s0[k] = 0.0;
  }
  const Field v0 = Field::from_spectrum(g, std::move(s0));

  std::vector<SolverConfig> configs{base};
  for (double lam : opt.lambdas) {
    if (!(lam > 0.0 && lam <= 1.0 && is_dyadic(1.0 / lam))) {
      throw ArgumentError("scaling_check: lambda must be 2^-j, got " + format_double(lam));
    }
    SolverConfig c = base;
    const double stretch = std::pow(lam, -(a + 1.0));
    c.grid = Grid(g.length() / lam, static_cast<int>(std::lround(g.n() / lam)));
    c.dt = base.dt * stretch;
    c.t_end = base.t_end * stretch;
    configs.push_back(c);
  }
  auto runs = detail::parallel_map<Trajectory>(configs.size(), [&](std::size_t i) {
    if (i == 0) return solve(configs[0], v0);
    const double lam = opt.lambdas[i - 1];
    return solve(configs[i], dilate(v0, configs[i].grid, std::pow(lam, a)));
  });

  ExperimentResult r;
  r.name = "scaling-test";
  r.seed = base.seed;
  r.thresholds = {{"max_deviation", opt.max_deviation}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].completed()) {
      r.solver_abort = true;
      r.notes.push_back(abort_note(
          i == 0 ? "base" : "lambda = " + format_double(opt.lambdas[i - 1]), runs[i]));
    }
  }
  if (r.solver_abort) {
    r.verdict = Verdict::Fail;
    return r;
  }

  ResultTable table{"deviation", {"lambda", "deviation"},
                    {"scaling factor",
                     "max over recorded times of the L^inf gap, relative to max L^inf of the scaled run"},
                    {}};
  bool pass = true;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const double lam = opt.lambdas[i - 1];
    const Trajectory& ref = runs[0];
    const Trajectory& sc = runs[i];
    if (ref.snapshots.size() != sc.snapshots.size()) {
      throw Error("scaling_check: recorded time grids differ for lambda = " +
                  format_double(lam));
    }
    double gap = 0.0, size = 0.0;
    for (std::size_t j = 0; j < sc.snapshots.size(); ++j) {
      const Field mapped = dilate(ref.snapshots[j], sc.config.grid, std::pow(lam, a));
      const auto& x = mapped.values();
      const auto& y = sc.snapshots[j].values();
      for (std::size_t q = 0; q < x.size(); ++q) {
        gap = std::max(gap, std::abs(x[q] - y[q]));
        size = std::max(size, std::abs(y[q]));
      }
    }
    const double dev = size > 0.0 ? gap / size : gap;
    table.rows.push_back({lam, dev});
    pass = pass && dev <= opt.max_deviation;
  }
  r.tables.push_back(std::move(table));
  double worst = 0.0;
  for (const auto& row : r.tables[0].rows) worst = std::max(worst, row[1]);
  r.summary.push_back({"max_deviation", worst});
  r.verdict = pass ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult bona_smith(const SolverConfig& base, const BonaSmithOptions& opt) {
  if (opt.cutoffs.empty()) throw ArgumentError("bona_smith: no cutoffs");
  for (std::size_t i = 0; i < opt.cutoffs.size(); ++i) {
    if (!is_dyadic(opt.cutoffs[i]) || (i > 0 && !(opt.cutoffs[i] > opt.cutoffs[i - 1]))) {
      throw ArgumentError("bona_smith: cutoffs must be increasing dyadics");
    }
  }
  const Grid& g = base.grid;
  Field u0 = Field::zeros(g);
  if (opt.profile == "power") {
    u0 = rough_data(g, opt.s, opt.delta, opt.seed, opt.amplitude);
  } else if (opt.profile == "gaussian") {
    if (!(opt.width > 0.0)) throw ArgumentError("bona_smith: width must be > 0");
    Field phases = rough_data(g, 0.0, -0.5, opt.seed, 1.0);  // unit modulus
    Spectrum s = phases.spectrum();
    for (int k = 0; k < g.half(); ++k) {
      const double z = g.wavenumber(k) / opt.width;
      s[k] *= opt.amplitude * std::exp(-z * z);
    }
    u0 = Field::from_spectrum(g, std::move(s));
  } else {
    throw ArgumentError("bona_smith: unknown profile '" + opt.profile + "'");
  }

  std::set<double> all(opt.cutoffs.begin(), opt.cutoffs.end());
  for (double n : opt.cutoffs) all.insert(4.0 * n);
  const std::vector<double> ns(all.begin(), all.end());
  auto runs = detail::parallel_map<Trajectory>(ns.size(), [&](std::size_t i) {
    return solve(base, project_space_low(u0, ns[i]));
  });

  ExperimentResult r;
  r.name = "bona-smith";
  r.seed = opt.seed;
  if (std::abs(opt.s - 0.5) < 1e-12 && std::abs(base.alpha - 1.0) < 1e-12) {
    r.notes.push_back("conditional-class: uniqueness at this (s, alpha) holds only in an auxiliary class");
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].completed()) {
      r.solver_abort = true;
      r.notes.push_back(abort_note("N = " + format_double(ns[i]), runs[i]));
    }
  }
  if (r.solver_abort) {
    r.verdict = Verdict::Fail;
    return r;
  }

  const double norm0 = sobolev(u0, opt.s);
  const double floor = 1e-10 * std::max(norm0, 1e-300);
  auto decreasing = [&](double prev, double next) {
    return next < prev || (prev <= floor && next <= floor);
  };
  r.summary.push_back({"data_norm", norm0});
  r.summary.push_back({"noise_floor", floor});

  const auto index = [&](double n) {
    return static_cast<std::size_t>(std::find(ns.begin(), ns.end(), n) - ns.begin());
  };
  std::vector<std::vector<double>> c(ns.size(), std::vector<double>(ns.size(), 0.0));
  auto pairs = detail::parallel_map<double>(ns.size() * ns.size(), [&](std::size_t q) {
    const std::size_t i = q / ns.size(), j = q % ns.size();
    return i < j ? max_distance(runs[i], runs[j], opt.s) : 0.0;
  });
  for (std::size_t i = 0; i < ns.size(); ++i) {
    for (std::size_t j = i + 1; j < ns.size(); ++j) c[i][j] = pairs[i * ns.size() + j];
  }

  ResultTable cauchy{"cauchy", {"N1", "N2", "C"},
                     {"lower cutoff", "upper cutoff",
                      "max over recorded times of the H^s distance between the two solutions"},
                     {}};
  bool columns_ok = true;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      cauchy.rows.push_back({ns[i], ns[j], c[i][j]});
      if (i > 0) columns_ok = columns_ok && decreasing(c[i - 1][j], c[i][j]);
    }
  }
  ResultTable tail{"tail", {"N", "C_N_4N"},
                   {"cutoff", "H^s distance between the N and 4N solutions"}, {}};
  bool tail_ok = true;
  for (std::size_t i = 0; i < opt.cutoffs.size(); ++i) {
    const double n = opt.cutoffs[i];
    const double v = c[index(n)][index(4.0 * n)];
    if (i > 0) tail_ok = tail_ok && decreasing(tail.rows.back()[1], v);
    tail.rows.push_back({n, v});
  }
  r.tables.push_back(std::move(cauchy));
  r.tables.push_back(std::move(tail));
  r.summary.push_back({"columns_decreasing", columns_ok ? 1.0 : 0.0});
  r.summary.push_back({"tail_decreasing", tail_ok ? 1.0 : 0.0});
  r.verdict = columns_ok && tail_ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult certify_symbol(const SymbolSpec& p, double alpha, const CertifyOptions& opt) {
  const auto h1 = certify_hypothesis1(p, alpha, opt.region);
  const auto d = check_lemma21(p, alpha, opt.derivative_xi_min, opt.derivative_xi_max,
                               opt.derivative_samples, DerivativeMethod::Auto,
                               opt.region.xi_floor, opt.region.eps_cert);
  ExperimentResult r;
  r.name = "certify-symbol";
  r.thresholds = {{"eps_cert", opt.region.eps_cert}, {"xi_floor", opt.region.xi_floor}};
  r.tables.push_back({"resonance_ratio",
                      {"ratio_min", "ratio_max", "samples", "excluded", "certified"},
                      {"min sampled ratio", "max sampled ratio", "points used",
                       "points with a vanishing frequency", "1 when ratio_min >= eps_cert"},
                      {{h1.ratio_min, h1.ratio_max, double(h1.samples), double(h1.excluded),
                        h1.certified ? 1.0 : 0.0}}});
  r.tables.push_back({"derivative_ratio",
                      {"first_min", "first_max", "second_min", "second_max", "certified"},
                      {"min |p'|/|xi|^a", "max |p'|/|xi|^a", "min |p''|/|xi|^(a-1)",
                       "max |p''|/|xi|^(a-1)", "1 when both minima >= eps_cert"},
                      {{d.first_min, d.first_max, d.second_min, d.second_max,
                        d.certified ? 1.0 : 0.0}}});
  r.summary = {{"ratio_min", h1.ratio_min}, {"ratio_max", h1.ratio_max}};
  r.notes.push_back("symbol: " + h1.family);
  r.notes.push_back("region: " + h1.region_description);
  r.verdict = h1.certified && d.certified ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> triple_row(const ResonanceTestResult& t) {
  return {t.triple.n[0], t.triple.n[1], t.triple.n[2], t.triple.l[0], t.triple.l[1],
          t.triple.l[2], t.classification == TripleClass::Violating ? 1.0 : 0.0,
          t.omega_min, t.omega_max, t.provably_zero ? 1.0 : 0.0, t.max_normalized,
          double(t.first_witness_trial)};
}

}  // namespace

ExperimentResult resonance_sweep(const SymbolSpec& p, double alpha,
                                 const ResonanceSweepOptions& opt) {
  const auto cert = certify_hypothesis1(p, alpha, opt.region);
  ExperimentResult r;
  r.name = "resonance-test";
  r.seed = opt.test.seed;
  r.thresholds = {{"vanish_threshold", opt.vanish_threshold},
                  {"witness_threshold", opt.test.witness_threshold}};
  r.summary = {{"certificate_min", cert.ratio_min}, {"certificate_max", cert.ratio_max}};
  if (!cert.certified) {
    r.notes.push_back("symbol not certified on " + cert.region_description);
    r.verdict = Verdict::Fail;
    return r;
  }

  auto run = [&](const ResonanceTriple& t, std::size_t index) {
    ResonanceTestOptions o = opt.test;
    o.seed = detail::task_seed(opt.test.seed, index);
    return resonance_support_test(t, p, &cert, alpha, o);
  };

  std::vector<ResonanceTestResult> results;
  if (!opt.triples.empty()) {
    results = detail::parallel_map<ResonanceTestResult>(
        opt.triples.size(), [&](std::size_t i) { return run(opt.triples[i], i); });
  } else {
    // Candidates grouped by frequency triple; groups are visited round-robin so
    // the kept triples spread over the scales.
    std::vector<std::array<double, 3>> freqs;
    for (double n1 : opt.n_scales) {
      for (double n2 : opt.n_scales) {
        if (n2 < n1) continue;
        for (double f : {1.0, 2.0}) freqs.push_back({n1, n2, f * n2});
      }
    }
    std::vector<std::vector<ResonanceTriple>> groups(freqs.size());
    std::vector<std::vector<ResonanceTriple>> compat_groups(freqs.size());
    for (std::size_t gi = 0; gi < freqs.size(); ++gi) {
      const auto& n = freqs[gi];
      for (double l1 : opt.l_scales) {
        for (double l2 : opt.l_scales) {
          for (double l3 : opt.l_scales) {
            ResonanceTriple t{n, {l1, l2, l3}};
            if (classify_triple(t, cert, alpha) == TripleClass::Violating) {
              groups[gi].push_back(t);
            }
          }
        }
      }
      // Modulation of the third function at the dyadic scale of
      // |Omega(N1, N2)|, the others at rest.
      const double om = std::abs(resonance(p, n[0], n[1]));
      if (om > 0.0) {
        ResonanceTriple t{n, {0.0, 0.0, std::exp2(std::round(std::log2(om)))}};
        if (classify_triple(t, cert, alpha) == TripleClass::Compatible) {
          compat_groups[gi].push_back(t);
        }
      }
    }
    // Round-robin over the groups; each group starts at a different offset so
    // the kept triples spread over the modulation scales too.
    auto interleave = [](const std::vector<std::vector<ResonanceTriple>>& gs, bool rotate) {
      std::vector<ResonanceTriple> out;
      for (std::size_t depth = 0;; ++depth) {
        bool any = false;
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
          const auto& grp = gs[gi];
          if (depth < grp.size()) {
            out.push_back(grp[rotate ? (depth + 7 * gi) % grp.size() : depth]);
            any = true;
          }
        }
        if (!any) break;
      }
      return out;
    };
    const auto violating = interleave(groups, true);
    const auto compatible = interleave(compat_groups, false);

    // Keep the first candidates with a nonempty frequency support (compatible
    // ones also not empty by band arithmetic), testing a chunk at a time in
    // candidate order.
    auto collect = [&](const std::vector<ResonanceTriple>& cand, int want, std::size_t offset,
                       bool need_support) {
      const std::size_t chunk = detail::pool_size();
      int kept = 0;
      for (std::size_t start = 0; start < cand.size() && kept < want; start += chunk) {
        const std::size_t count = std::min(chunk, cand.size() - start);
        auto part = detail::parallel_map<ResonanceTestResult>(count, [&](std::size_t i) {
          return run(cand[start + i], offset + start + i);
        });
        for (auto& t : part) {
          if (kept < want && !t.frequency_support_empty && !(need_support && t.provably_zero)) {
            results.push_back(std::move(t));
            ++kept;
          }
        }
      }
      return kept;
    };
    const int nv = collect(violating, opt.violating, 0, false);
    const int nc = collect(compatible, opt.compatible, violating.size(), true);
    if (nv < opt.violating || nc < opt.compatible) {
      r.notes.push_back("only " + std::to_string(nv) + " violating and " +
                        std::to_string(nc) + " compatible triples with a usable support");
    }
  }

  ResultTable table{"triples",
                    {"n1", "n2", "n3", "l1", "l2", "l3", "violating", "omega_min", "omega_max",
                     "provably_zero", "max_normalized", "first_witness_trial"},
                    {"frequency scale 1", "frequency scale 2", "frequency scale 3",
                     "modulation scale 1 (0: |sigma| < 2^-1/2)", "modulation scale 2",
                     "modulation scale 3", "1 when the scales violate the resonance relation",
                     "min |Omega| over admissible lattice triples",
                     "max |Omega| over admissible lattice triples",
                     "1 when band arithmetic proves the integral vanishes",
                     "max over trials of |integral| / product of norms",
                     "first trial with a nonzero integral (-1: none)"},
                    {}};
  int violating = 0, compatible = 0, bad = 0, missing = 0, proved = 0;
  double worst = 0.0;
  for (const auto& t : results) {
    table.rows.push_back(triple_row(t));
    if (t.classification == TripleClass::Violating) {
      ++violating;
      if (t.provably_zero) ++proved;
      worst = std::max(worst, t.max_normalized);
      if (!(t.max_normalized < opt.vanish_threshold)) ++bad;
    } else {
      ++compatible;
      if (t.first_witness_trial < 0) ++missing;
    }
  }
  r.tables.push_back(std::move(table));
  r.summary.push_back({"violating", double(violating)});
  r.summary.push_back({"compatible", double(compatible)});
  r.summary.push_back({"violating_provably_zero", double(proved)});
  r.summary.push_back({"violating_nonzero", double(bad)});
  r.summary.push_back({"compatible_without_witness", double(missing)});
  r.summary.push_back({"max_violating_normalized", worst});
  const bool enough = !opt.triples.empty() ||
                      (violating >= opt.violating && compatible >= opt.compatible);
  if (bad > 0 || missing > 0) {
    r.verdict = Verdict::Fail;
  } else {
    r.verdict = enough && !results.empty() ? Verdict::Pass : Verdict::Inconclusive;
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentResult inequality_meter(MeterKind kind, const MeterSweep& sweep) {
  const EstimateReport rep = run_meter(kind, sweep);
  ExperimentResult r;
  r.name = "meter:" + rep.name;
  r.seed = sweep.seed;
  r.thresholds = {{"stability_factor", sweep.stability_factor}};
  ResultTable table{rep.name, {}, {}, {}};
  for (const auto& [axis, values] : sweep.axes) {
    table.columns.push_back(axis);
    table.column_docs.push_back("sweep parameter");
  }
  table.columns.insert(table.columns.end(),
                       {"lhs", "rhs", "ratio", "excluded", "counterexample"});
  table.column_docs.insert(table.column_docs.end(),
                           {"left side", "right side without the constant", "lhs / rhs",
                            "1 when outside the stated range", "1 for rhs = 0 with lhs != 0"});
  std::vector<std::string> extras;
  if (!rep.records.empty()) {
    for (const auto& [k, v] : rep.records.front().extras) {
      table.columns.push_back(k);
      table.column_docs.push_back("auxiliary measurement");
      extras.push_back(k);
    }
  }
  for (const auto& rec : rep.records) {
    std::vector<double> row;
    for (const auto& [k, v] : rec.params) row.push_back(v);
    row.insert(row.end(), {rec.lhs, rec.rhs, rec.ratio, rec.excluded ? 1.0 : 0.0,
                           rec.counterexample ? 1.0 : 0.0});
    for (const auto& [k, v] : rec.extras) row.push_back(v);
    row.resize(table.columns.size(), NAN);
    table.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(table));
  r.summary = {{"max_ratio", rep.max_ratio},
               {"median_ratio", rep.median_ratio},
               {"spread", rep.median_ratio > 0.0 ? rep.max_ratio / rep.median_ratio : NAN},
               {"counterexamples", double(rep.counterexamples)},
               {"excluded", double(rep.excluded)}};
  r.notes.push_back("data: " + rep.sample_description);
  const bool counted = rep.records.size() > static_cast<std::size_t>(rep.excluded);
  r.verdict = !counted ? Verdict::Inconclusive : rep.stable ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------

double existence_exponent(double alpha) {
  if (!(alpha > 0.5)) throw ArgumentError("existence_exponent: alpha must exceed 1/2");
  return -2.0 * (alpha + 1.0) / (2.0 * alpha - 1.0);
}

ExperimentResult existence_time_probe(const SolverConfig& base, const Field& shape,
                                      const ExistenceProbeOptions& opt) {
  if (opt.amplitudes.empty()) throw ArgumentError("existence_time_probe: no amplitudes");
  for (std::size_t i = 0; i < opt.amplitudes.size(); ++i) {
    if (!(opt.amplitudes[i] >= 0.0) ||
        (i > 0 && !(opt.amplitudes[i] > opt.amplitudes[i - 1]))) {
      throw ArgumentError("existence_time_probe: amplitudes must be increasing and >= 0");
    }
  }
  if (!(opt.tolerance_factor >= 1.0)) {
    throw ArgumentError("existence_time_probe: tolerance_factor must be >= 1");
  }
  const double a = base.alpha;
  const double e = existence_exponent(a);
  const double norm = sobolev(shape, 1.0 - a / 2.0);
  auto runs = detail::parallel_map<Trajectory>(opt.amplitudes.size(), [&](std::size_t i) {
    return solve(base, scaled(shape, opt.amplitudes[i]));
  });

  ExperimentResult r;
  r.name = "existence-probe";
  r.seed = base.seed;
  r.thresholds = {{"tolerance_factor", opt.tolerance_factor}};
  r.summary = {{"exponent", e}, {"shape_norm", norm}};

  // c is anchored at the smallest amplitude that fails; larger amplitudes must
  // not fail much earlier than the curve through that point.
  double c = NAN;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].completed()) {
      c = runs[i].failure_time / std::pow(1.0 + opt.amplitudes[i] * norm, e);
      break;
    }
  }
  r.summary.push_back({"fitted_c", c});

  ResultTable table{"failure_times", {"A", "time", "censored", "status", "bound"},
                    {"amplitude", "failure time, or t_end when censored",
                     "1 when the solve reached t_end",
                     "0 completed, 1 blowup, 2 resolution loss, 3 not a number",
                     "fitted lower-bound curve c (1 + A ||shape||)^exponent"},
                    {}};
  bool monotone = true, above = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& t = runs[i];
    const double time = t.completed() ? base.t_end : t.failure_time;
    const double bound = c * std::pow(1.0 + opt.amplitudes[i] * norm, e);
    if (i > 0 && time > table.rows.back()[1]) monotone = false;
    if (!t.completed() && time < bound / opt.tolerance_factor) above = false;
    table.rows.push_back({opt.amplitudes[i], time, t.completed() ? 1.0 : 0.0,
                          double(static_cast<int>(t.status)), bound});
    if (!t.completed()) {
      r.notes.push_back("A = " + format_double(opt.amplitudes[i]) + ": " + to_string(t.status) +
                        " at t = " + format_double(t.failure_time));
    }
  }
  r.tables.push_back(std::move(table));
  r.summary.push_back({"monotone", monotone ? 1.0 : 0.0});
  if (std::isnan(c)) r.notes.push_back("no failure before t_end; curve not fitted");
  r.verdict = monotone && above ? Verdict::Pass : Verdict::Fail;
  return r;
}

}  // namespace dispersolve
