#include "dispersolve/solver.hpp"

#include <cmath>
#include <numbers>

#include "dispersolve/errors.hpp"
#include "dispersolve/norms.hpp"
#include "format.hpp"

namespace dispersolve {

using detail::format_double;

std::string to_string(Integrator i) {
  return i == Integrator::Etdrk4 ? "etdrk4" : "lawson4";
}

Integrator parse_integrator(const std::string& text) {
  if (text == "etdrk4" || text == "ETDRK4") return Integrator::Etdrk4;
  if (text == "lawson4" || text == "Lawson4") return Integrator::Lawson4;
  throw ArgumentError("unknown integrator '" + text + "' (etdrk4, lawson4)");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Completed: return "completed";
    case SolveStatus::Blowup: return "blowup";
    case SolveStatus::ResolutionLoss: return "resolution-loss";
    case SolveStatus::NotANumber: return "nan";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (dispersion.role() != SymbolRole::Dispersion) {
    throw ArgumentError("dispersion symbol has the dissipation role");
  }
  if (dissipation && dissipation->role() != SymbolRole::Dissipation) {
    throw ArgumentError("dissipation symbol has the dispersion role");
  }
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw ArgumentError("alpha must lie in [1, 2], got " + format_double(alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0 + alpha)) {
    throw ArgumentError("beta must satisfy 0 <= beta <= 1 + alpha, got beta = " +
                        format_double(beta) + ", alpha = " + format_double(alpha));
  }
  if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be >= 0");
  if (epsilon > 0.0 && !dissipation) {
    throw ArgumentError("epsilon > 0 requires a dissipation symbol");
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ArgumentError("dt and t_end must be > 0");
  if (record_stride < 1) throw ArgumentError("record_stride must be >= 1");
  const double pmax = std::abs(eval_dispersion(dispersion, grid.wavenumber(grid.n() / 2)));
  if (!std::isfinite(pmax * dt)) {
    throw ArgumentError("dt * max|p| overflows on this grid");
  }
}

MeanReduction mean_zero_reduce(const Field& u0) {
  Spectrum s = u0.spectrum();
  const double mean = s[0].real();
  s[0] = 0.0;
  return {Field::from_spectrum(u0.grid(), std::move(s)), mean};
}

namespace {

double zero_mode_decay(const SolverConfig& c) {
  if (c.epsilon == 0.0 || !c.dissipation) return 0.0;
  return c.epsilon * eval_dissipation(*c.dissipation, 0.0);
}

}  // namespace

double mean_at(const SolverConfig& config, double mean0, double t) {
  return mean0 * std::exp(-zero_mode_decay(config) * t);
}

double mean_shift(const SolverConfig& config, double mean0, double t) {
  const double d = zero_mode_decay(config);
  if (d == 0.0) return mean0 * t;
  return mean0 * -std::expm1(-d * t) / d;
}

Field translate(const Field& f, double shift) {
  if (shift == 0.0) return f;
  return apply_multiplier(f, [shift](double xi) { return std::polar(1.0, -xi * shift); });
}

Trajectory mean_zero_restore(Trajectory reduced, double mean0) {
  for (std::size_t i = 0; i < reduced.snapshots.size(); ++i) {
    const double t = reduced.times[i];
    const double m = mean_at(reduced.config, mean0, t);
    Spectrum s = translate(reduced.snapshots[i], mean_shift(reduced.config, mean0, t)).spectrum();
    s[0] += m;
    reduced.snapshots[i] = Field::from_spectrum(reduced.snapshots[i].grid(), std::move(s));
    reduced.diagnostics[i] = diagnose(reduced.config, reduced.snapshots[i], t);
  }
  return reduced;
}

namespace {

std::vector<Complex> linear_coefficients(const SolverConfig& c) {
  const Grid& g = c.grid;
  std::vector<Complex> out(g.half());
  for (int k = 0; k < g.half(); ++k) {
    const double xi = g.wavenumber(k);
    double damp = 0.0;
    if (c.epsilon > 0.0) damp = c.epsilon * eval_dissipation(*c.dissipation, xi);
    out[k] = Complex(-damp, -eval_dispersion(c.dispersion, xi));
  }
  return out;
}

double tail_fraction(const Grid& g, const Spectrum& s) {
  const int top = g.dealias_cutoff();
  double tail = 0.0, total = 0.0;
  for (int k = 1; k < g.half(); ++k) {
    const double e = std::norm(s[k]);
    total += e;
    if (6 * k > g.n() && k <= top) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

// Mean over 32 points of the unit circle around z of f.
template <typename F>
Complex contour_mean(Complex z, F f) {
  constexpr int kPoints = 32;
  Complex acc = 0.0;
  for (int j = 1; j <= kPoints; ++j) {
    const Complex r = std::polar(1.0, 2.0 * std::numbers::pi * (j - 0.5) / kPoints);
    acc += f(z + r);
  }
  return acc / static_cast<double>(kPoints);
}

class Stepper {
 public:
  explicit Stepper(const SolverConfig& c, double h) : grid_(c.grid), dealias_(c.dealias), h_(h) {
    const auto lin = linear_coefficients(c);
    const int half = grid_.half();
    e_.resize(half);
    e2_.resize(half);
    q_.resize(half);
    f1_.resize(half);
    f2_.resize(half);
    f3_.resize(half);
    for (int k = 0; k < half; ++k) {
      const Complex z = lin[k] * h;
      e_[k] = std::exp(z);
      e2_[k] = std::exp(0.5 * z);
      if (c.integrator != Integrator::Etdrk4) continue;
      q_[k] = h * contour_mean(z, [](Complex w) { return (std::exp(0.5 * w) - 1.0) / w; });
      f1_[k] = h * contour_mean(z, [](Complex w) {
                 return (-4.0 - w + std::exp(w) * (4.0 - 3.0 * w + w * w)) / (w * w * w);
               });
      f2_[k] = h * contour_mean(z, [](Complex w) {
                 return (2.0 + w + std::exp(w) * (-2.0 + w)) / (w * w * w);
               });
      f3_[k] = h * contour_mean(z, [](Complex w) {
                 return (-4.0 - 3.0 * w - w * w + std::exp(w) * (4.0 - w)) / (w * w * w);
               });
    }
  }

  /// -(i xi / 2) F(v^2), truncated to |k| <= n/3 when dealiasing.
  Spectrum nonlinear(const std::vector<double>& v) const {
    std::vector<double> sq(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sq[j] = v[j] * v[j];
    Spectrum s = transform(grid_, sq);
    const int top = dealias_ ? grid_.dealias_cutoff() : grid_.n() / 2 - 1;
    for (int k = 0; k < grid_.half(); ++k) {
      s[k] = k <= top ? Complex(0.0, -0.5 * grid_.wavenumber(k)) * s[k] : 0.0;
    }
    return s;
  }

  Spectrum nonlinear_of(const Spectrum& v) const {
    return nonlinear(inverse_transform(grid_, v));
  }

  Spectrum etdrk4(const Spectrum& v, const Spectrum& nv) const {
    const int half = grid_.half();
    Spectrum a(half), b(half), c(half), out(half);
    for (int k = 0; k < half; ++k) a[k] = e2_[k] * v[k] + q_[k] * nv[k];
    const auto na = nonlinear_of(a);
    for (int k = 0; k < half; ++k) b[k] = e2_[k] * v[k] + q_[k] * na[k];
    const auto nb = nonlinear_of(b);
    for (int k = 0; k < half; ++k) c[k] = e2_[k] * a[k] + q_[k] * (2.0 * nb[k] - nv[k]);
    const auto nc = nonlinear_of(c);
    for (int k = 0; k < half; ++k) {
      out[k] = e_[k] * v[k] + f1_[k] * nv[k] + 2.0 * f2_[k] * (na[k] + nb[k]) + f3_[k] * nc[k];
    }
    return out;
  }

  Spectrum lawson4(const Spectrum& v, const Spectrum& k1) const {
    const int half = grid_.half();
    Spectrum a(half), b(half), c(half), out(half);
    for (int k = 0; k < half; ++k) a[k] = e2_[k] * (v[k] + 0.5 * h_ * k1[k]);
    const auto k2 = nonlinear_of(a);
    for (int k = 0; k < half; ++k) b[k] = e2_[k] * v[k] + 0.5 * h_ * k2[k];
    const auto k3 = nonlinear_of(b);
    for (int k = 0; k < half; ++k) c[k] = e_[k] * v[k] + h_ * e2_[k] * k3[k];
    const auto k4 = nonlinear_of(c);
    for (int k = 0; k < half; ++k) {
      out[k] = e_[k] * v[k] +
               h_ / 6.0 * (e_[k] * k1[k] + 2.0 * e2_[k] * (k2[k] + k3[k]) + k4[k]);
    }
    return out;
  }

 private:
  Grid grid_;
  bool dealias_;
  double h_;
  std::vector<Complex> e_, e2_, q_, f1_, f2_, f3_;
};

long step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    return std::max(1L, static_cast<long>(nearest));
  }
  return static_cast<long>(std::ceil(ratio));
}

}  // namespace

Diagnostics diagnose(const SolverConfig& config, const Field& u, double t) {
  Diagnostics d;
  d.time = t;
  d.mass = mass(u);
  try {
    d.hamiltonian = hamiltonian(u, config.dispersion);
  } catch (const PreconditionError&) {
    d.hamiltonian = std::nan("");
  }
  d.max_abs = u.max_abs();
  d.tail_fraction = tail_fraction(u.grid(), u.spectrum());
  return d;
}

Field linear_propagate(const SolverConfig& config, const Field& f, double t) {
  const auto lin = linear_coefficients(config);
  const Grid& g = config.grid;
  Spectrum s = f.spectrum();
  for (int k = 0; k < g.half(); ++k) s[k] *= std::exp(lin[k] * t);
  s[g.n() / 2] = 0.0;
  return Field::from_spectrum(g, std::move(s));
}

Trajectory solve(const SolverConfig& config, const Field& u0) {
  config.validate();
  if (!(u0.grid() == config.grid)) {
    throw ArgumentError("initial data is not on the configured grid");
  }
  const Grid& g = config.grid;
  const long nsteps = step_count(config.t_end, config.dt);
  const double h = config.t_end / nsteps;
  const auto [v0, mean0] = mean_zero_reduce(u0);
  Spectrum v = v0.spectrum();
  if (config.dealias) {
    for (int k = g.dealias_cutoff() + 1; k < g.half(); ++k) v[k] = 0.0;
  }
  v[g.n() / 2] = 0.0;

  Trajectory traj;
  traj.config = config;
  traj.dt_used = h;
  const Stepper stepper(config, h);
  for (long step = 0;; ++step) {
    const double t = step == nsteps ? config.t_end : step * h;
    const auto phys = inverse_transform(g, v);
    double vmax = 0.0;
    bool finite = true;
    for (double x : phys) {
      if (!std::isfinite(x)) finite = false;
      vmax = std::max(vmax, std::abs(x));
    }
    const double amplitude = vmax + std::abs(mean_at(config, mean0, t));
    const double tail = tail_fraction(g, v);
    SolveStatus bad = SolveStatus::Completed;
    if (!finite) {
      bad = SolveStatus::NotANumber;
      traj.failure_message = "non-finite value in the solution";
    } else if (amplitude > config.max_amplitude) {
      bad = SolveStatus::Blowup;
      traj.failure_message = "max|u| = " + format_double(amplitude) + " exceeds " +
                             format_double(config.max_amplitude);
    } else if (tail > config.max_tail_fraction) {
      bad = SolveStatus::ResolutionLoss;
      traj.failure_message = "spectral tail fraction " + format_double(tail) +
                             " exceeds " + format_double(config.max_tail_fraction);
    }
    if (bad != SolveStatus::Completed) {
      traj.status = bad;
      traj.failure_time = t;
      break;
    }
    if (step % config.record_stride == 0 || step == nsteps) {
      traj.times.push_back(t);
      traj.snapshots.push_back(Field::from_spectrum(g, v));
      traj.diagnostics.push_back(Diagnostics{});
    }
    if (step == nsteps) break;
    const auto nv = stepper.nonlinear(phys);
    v = config.integrator == Integrator::Etdrk4 ? stepper.etdrk4(v, nv)
                                                : stepper.lawson4(v, nv);
    v[0] = 0.0;
  }
  return mean_zero_restore(std::move(traj), mean0);
}

Trajectory dissipative_solve(const SolverConfig& config, const Field& u0) {
  if (!(config.epsilon > 0.0) || !config.dissipation) {
    throw ArgumentError("dissipative_solve needs epsilon > 0 and a dissipation symbol");
  }
  return solve(config, u0);
}

}  // namespace dispersolve
