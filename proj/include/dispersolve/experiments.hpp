#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dispersolve/meters.hpp"
#include "dispersolve/resonance_test.hpp"
#include "dispersolve/solver.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> column_docs;  // one per column, for the CSV schema
  std::vector<std::vector<double>> rows;
};

/// Least-squares line y = slope x + intercept; `residual` is the RMS misfit.
struct Fit {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  int points = 0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                  std::string name = "");

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct ExperimentResult {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<ResultTable> tables;
  std::vector<Fit> fits;
  std::vector<std::pair<std::string, double>> summary;
  /// Acceptance thresholds as received from the configuration.
  std::vector<std::pair<std::string, double>> thresholds;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::Inconclusive;
  /// A constituent solve aborted; the failure is described in `notes`.
  bool solver_abort = false;

  double summary_value(const std::string& key) const;
};

/// Initial data from text:
///   "fourier:a0=0.1,a1=0.5,b2=0.3"  sum a_k cos(k x') + b_k sin(k x'), x' = 2 pi x / length
///   "soliton:c=1[,x0=..]"           KdV soliton 3c sech^2(sqrt(c)(x-x0)/2)
///   "bo-wave:width=1[,x0=..]"       periodic travelling wave of the alpha = 1 equation
///   "gaussian:a=1,width=1[,x0=..]"
///   "rough:s=0,delta=0.05"          power-law spectrum with quasi-random phases (seeded)
///   "file:path=u0.txt"              a field file
/// x0 defaults to length / 2.
Field initial_field(std::string_view spec, const Grid& grid, std::uint64_t seed);

/// |u_hat(k)| = amplitude <xi_k>^{-s-1/2-delta}, phase 2 pi frac(theta0 + k g),
/// g the golden ratio conjugate, theta0 drawn from the seed. No mean, no
/// Nyquist mode.
Field rough_data(const Grid& grid, double s, double delta, std::uint64_t seed,
                 double amplitude = 1.0);

struct DissipativeLimitOptions {
  std::vector<double> epsilons;  // descending, in [0, 1]
  double s = 0.0;
  /// Comparison horizon; defaults to half the shortest failure-free horizon.
  std::optional<double> horizon;
  double min_order = 0.8;
  /// Number of trailing points in the order fit (>= 3).
  int fit_points = 3;
};

ExperimentResult dissipative_limit(const SolverConfig& base, const Field& u0,
                                   const DissipativeLimitOptions& opt);

struct ScalingOptions {
  std::vector<double> lambdas;  // each 2^-j
  double max_deviation = 1e-5;
};

ExperimentResult scaling_check(const SolverConfig& base, const Field& u0,
                               const ScalingOptions& opt);

struct BonaSmithOptions {
  std::vector<double> cutoffs;  // dyadic N, increasing
  double s = 0.0;
  double delta = 0.05;
  /// "power" (rough data) or "gaussian" (smooth data with spectrum exp(-xi^2/width^2)).
  std::string profile = "power";
  double width = 4.0;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

ExperimentResult bona_smith(const SolverConfig& base, const BonaSmithOptions& opt);

struct CertifyOptions {
  CertificateRegion region;
  double derivative_xi_min = 8.0;
  double derivative_xi_max = 1024.0;
  int derivative_samples = 64;
};

ExperimentResult certify_symbol(const SymbolSpec& p, double alpha, const CertifyOptions& opt);

struct ResonanceSweepOptions {
  /// Explicit triples; when empty, candidates are enumerated over the dyadic
  /// scales below and the first `violating` / `compatible` of each class kept.
  std::vector<ResonanceTriple> triples;
  int violating = 20;
  int compatible = 5;
  std::vector<double> n_scales{1, 2, 4, 8, 16};
  std::vector<double> l_scales{0, 1, 4, 16, 64, 256};
  ResonanceTestOptions test;
  double vanish_threshold = 1e-10;
  CertificateRegion region = [] {
    CertificateRegion r;
    r.positive_quadrant = true;
    r.shape = RegionShape::BothLarge;
    return r;
  }();
};

/// Certifies the symbol on the positive quadrant, then runs the support test
/// on each triple. Pass: every violating triple vanishes below the threshold
/// and every compatible triple has a witness.
ExperimentResult resonance_sweep(const SymbolSpec& p, double alpha,
                                 const ResonanceSweepOptions& opt);

ExperimentResult inequality_meter(MeterKind kind, const MeterSweep& sweep);

struct ExistenceProbeOptions {
  std::vector<double> amplitudes;  // increasing
  /// Failures may sit below the anchored curve by at most this factor.
  double tolerance_factor = 4.0;
};

/// Solves from A * shape for each amplitude and records the failure time
/// (censored at t_end) and mode. The curve c (1 + A ||shape||_{H^{1-a/2}})^{-2(a+1)/(2a-1)}
/// passes through the smallest failing amplitude. Pass: recorded times are
/// non-increasing in A and no failure lies below the curve by more than
/// tolerance_factor.
ExperimentResult existence_time_probe(const SolverConfig& base, const Field& shape,
                                      const ExistenceProbeOptions& opt);

/// -2(alpha+1)/(2 alpha - 1).
double existence_exponent(double alpha);

}  // namespace dispersolve
