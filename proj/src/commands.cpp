#include "dispersolve/commands.hpp"

#include <cmath>

#include "dispersolve/errors.hpp"
#include "dispersolve/meters.hpp"
#include "dispersolve/trajectory_io.hpp"

namespace dispersolve {

namespace {

CertificateRegion region(const RunConfig& c) {
  CertificateRegion r;
  r.xi1_min = c.number("xi1_min");
  r.xi1_max = c.number("xi1_max");
  r.xi2_min = c.number("xi2_min");
  r.xi2_max = c.number("xi2_max");
  r.lambda_min = c.number("lambda_min");
  r.lambda_max = c.number("lambda_max");
  r.samples_per_axis = static_cast<int>(c.number("samples_per_axis"));
  const std::string shape = c.text("region");
  if (shape == "first-large") {
    r.shape = RegionShape::FirstLarge;
  } else if (shape == "both-large") {
    r.shape = RegionShape::BothLarge;
  } else {
    throw ConfigError("experiment.region: expected \"first-large\" or \"both-large\"");
  }
  r.positive_quadrant = c.flag("positive_quadrant");
  r.xi_floor = c.number("xi_floor");
  r.eps_cert = c.number("eps_cert");
  return r;
}

}  // namespace

SpaceTimeField trajectory_field(const Trajectory& traj) {
  if (traj.snapshots.empty()) throw ArgumentError("trajectory has no snapshots");
  if (traj.snapshots.size() == 1) {
    return SpaceTimeField::from_snapshots(traj.snapshots, traj.times[0], traj.dt_used);
  }
  const double dt = traj.times[1] - traj.times[0];
  std::size_t m = 1;
  while (m < traj.times.size() &&
         std::abs(traj.times[m] - traj.times[0] - m * dt) <= 1e-9 * std::max(1.0, m * dt)) {
    ++m;
  }
  std::vector<Field> snaps(traj.snapshots.begin(), traj.snapshots.begin() + m);
  return SpaceTimeField::from_snapshots(snaps, traj.times[0], dt);
}

ExperimentResult norm_report(const Trajectory& traj, const std::vector<std::string>& norms) {
  if (norms.empty()) throw ArgumentError("norms: no norm given");
  const SpaceTimeField f = trajectory_field(traj);
  ExperimentResult r;
  r.name = "norms";
  r.seed = traj.config.seed;
  ResultTable t{"norms", {"index", "value"}, {"position in the norm list", "norm value"}, {}};
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const NormSpec spec = NormSpec::parse(norms[i]);
    const NormValue v = evaluate_norm(spec, f, traj.config.dispersion, traj.config.alpha);
    t.rows.push_back({double(i), v.value});
    std::string note = std::to_string(i) + ": " + spec.to_string() + " = " + std::to_string(v.value);
    for (const auto& [k, x] : v.parts) note += ", " + k + " = " + std::to_string(x);
    for (const auto& w : v.warnings) note += " (warning: " + w + ")";
    r.notes.push_back(note);
    r.summary.push_back({spec.to_string(), v.value});
  }
  r.tables.push_back(std::move(t));
  r.notes.push_back("snapshots used: " + std::to_string(f.m()) + " of " +
                    std::to_string(traj.snapshots.size()));
  r.verdict = Verdict::Pass;
  return r;
}

ExperimentResult run_experiment(const RunConfig& c) {
  const std::string& name = c.experiment;
  if (name == "solve") throw ArgumentError("run_experiment: 'solve' produces a trajectory");
  if (name == "norms") {
    if (c.text("trajectory").empty()) {
      throw ConfigError("experiment.trajectory: a trajectory file is required");
    }
    return norm_report(read_trajectory(c.text("trajectory")), c.texts("norms"));
  }
  if (name == "certify-symbol") {
    CertifyOptions o;
    o.region = region(c);
    o.derivative_xi_min = c.number("derivative_xi_min");
    o.derivative_xi_max = c.number("derivative_xi_max");
    o.derivative_samples = static_cast<int>(c.number("derivative_samples"));
    auto r = certify_symbol(SymbolSpec::parse(c.dispersion, SymbolRole::Dispersion), c.alpha, o);
    r.seed = c.seed;
    return r;
  }
  if (name == "resonance-test") {
    ResonanceSweepOptions o;
    o.region = region(c);
    o.violating = static_cast<int>(c.number("violating"));
    o.compatible = static_cast<int>(c.number("compatible"));
    o.test.trials = static_cast<int>(c.number("trials"));
    o.test.dtau = c.number("dtau");
    o.test.length = c.number("period");
    o.test.seed = c.seed;
    o.test.witness_threshold = c.number("witness_threshold");
    o.vanish_threshold = c.number("vanish_threshold");
    return resonance_sweep(SymbolSpec::parse(c.dispersion, SymbolRole::Dispersion), c.alpha, o);
  }
  if (name == "meter") {
    const MeterKind kind = parse_meter(c.text("meter"));
    MeterSweep sw = default_sweep(kind);
    for (auto& [axis, values] : sw.axes) {
      if (c.has(axis)) values = c.numbers(axis);
    }
    if (c.has("trials")) sw.trials = static_cast<int>(c.number("trials"));
    sw.stability_factor = c.number("stability_factor");
    sw.mode = c.text("cutoff") == "sharp" ? CutoffMode::Sharp : CutoffMode::Smooth;
    sw.alpha = c.alpha;
    sw.seed = c.seed;
    return inequality_meter(kind, sw);
  }

  const SolverConfig base = solver_config(c);
  if (name == "bona-smith") {
    BonaSmithOptions o;
    o.cutoffs = c.numbers("cutoffs");
    o.s = c.number("s");
    o.delta = c.number("delta");
    o.profile = c.text("profile");
    o.width = c.number("width");
    o.amplitude = c.number("amplitude");
    o.seed = c.seed;
    return bona_smith(base, o);
  }
  const Field u0 = initial_field(c.initial, base.grid, c.seed);
  if (name == "diss-limit") {
    DissipativeLimitOptions o;
    o.epsilons = c.numbers("epsilons");
    o.s = c.number("s");
    if (c.has("horizon")) o.horizon = c.number("horizon");
    o.min_order = c.number("min_order");
    o.fit_points = static_cast<int>(c.number("fit_points"));
    return dissipative_limit(base, u0, o);
  }
  if (name == "scaling-test") {
    ScalingOptions o;
    o.lambdas = c.numbers("lambdas");
    o.max_deviation = c.number("max_deviation");
    return scaling_check(base, u0, o);
  }
  if (name == "existence-probe") {
    ExistenceProbeOptions o;
    o.amplitudes = c.numbers("amplitudes");
    o.tolerance_factor = c.number("tolerance_factor");
    return existence_time_probe(base, u0, o);
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

int exit_code(const std::string& verdict) {
  if (verdict == "pass") return 0;
  if (verdict == "solver-abort") return 3;
  return 1;
}

}  // namespace dispersolve
