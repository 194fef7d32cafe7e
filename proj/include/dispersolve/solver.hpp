#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dispersolve/spectral_grid.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

enum class Integrator { Etdrk4, Lawson4 };

std::string to_string(Integrator i);
Integrator parse_integrator(const std::string& text);

/// u_t + L u + eps A u + (u^2/2)_x = 0 with L = i p(D), A = q(D).
struct SolverConfig {
  SymbolSpec dispersion = SymbolSpec::pure_power(1.0);
  std::optional<SymbolSpec> dissipation;
  double alpha = 1.0;
  double beta = 0.0;
  double epsilon = 0.0;
  Grid grid{2.0 * std::numbers::pi, 64};
  double dt = 1e-3;
  double t_end = 1.0;
  Integrator integrator = Integrator::Etdrk4;
  /// 2/3-rule truncation of the nonlinearity and of the initial data.
  bool dealias = true;
  int record_stride = 1;
  std::uint64_t seed = 0;
  // abort thresholds
  double max_amplitude = 1e6;
  double max_tail_fraction = 0.1;

  /// Throws ArgumentError on a violated invariant.
  void validate() const;
};

struct Diagnostics {
  double time = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double max_abs = 0.0;
  double tail_fraction = 0.0;  // energy in n/6 < |k| <= n/3 over total
};

enum class SolveStatus { Completed, Blowup, ResolutionLoss, NotANumber };

std::string to_string(SolveStatus s);

struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<Diagnostics> diagnostics;
  SolveStatus status = SolveStatus::Completed;
  /// Time at which the abort condition was first detected.
  double failure_time = 0.0;
  std::string failure_message;
  /// Step actually used: t_end / ceil(t_end / dt).
  double dt_used = 0.0;

  bool completed() const { return status == SolveStatus::Completed; }
};

/// v0 = u0 - mean(u0).
struct MeanReduction {
  Field v0;
  double mean;
};
MeanReduction mean_zero_reduce(const Field& u0);

/// Mean of the original solution at time t: m0 exp(-eps q(0) t).
double mean_at(const SolverConfig& config, double mean0, double t);
/// Shift X(t) = int_0^t mean(s) ds.
double mean_shift(const SolverConfig& config, double mean0, double t);

/// u(t, x) = m(t) + v(t, x - X(t)) applied to each snapshot of a trajectory
/// of the reduced (mean-zero) equation.
Trajectory mean_zero_restore(Trajectory reduced, double mean0);

/// Spectral translation f(x - shift).
Field translate(const Field& f, double shift);

/// Integrates from u0 in the mean-zero frame and restores the mean. Aborts
/// cleanly (status != Completed, partial trajectory kept) on NaN, max|u| above
/// the amplitude limit, or a tail fraction above the resolution limit.
Trajectory solve(const SolverConfig& config, const Field& u0);

/// Same pipeline; requires epsilon > 0 and a dissipation symbol.
Trajectory dissipative_solve(const SolverConfig& config, const Field& u0);

/// exp(-(i p(xi) + eps q(xi)) t) applied to f: the free evolution.
Field linear_propagate(const SolverConfig& config, const Field& f, double t);

Diagnostics diagnose(const SolverConfig& config, const Field& u, double t);

}  // namespace dispersolve
