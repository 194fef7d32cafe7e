#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dispersolve/lp_toolkit.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

/// Inequalities with an unspecified constant, measured over parameter sweeps:
///   EstPi       |int Pi(f1,f2) f3| <= C N_min^{1/2} prod ||f_i||
///   Lemma24     ||1^high_{T,R}||_{L1} <= C min(T, 1/R)
///   Lemma25     ||Q_L(1^low_{T,R} u)|| <= C ||Q_{L/4..4L} u||, L >= 16R
///   Lemma42B1   ||Q_{>=B} w_N|| <= C B^-1 N^{(1+a)/2} ||Q_{>=B} w_N||_F, B <= N^{a+1}
///   Lemma42B2   same with B^{-5/8} <N>^{(1+a)/8}, B >= <N>^{a+1}
///   Commutator  ||[J^s d_x, f] g|| <= C ||f_x||_{H^{s+1}} ||g||_{H^s}
enum class MeterKind { EstPi, Lemma24, Lemma25, Lemma42B1, Lemma42B2, Commutator };

std::string to_string(MeterKind k);
MeterKind parse_meter(const std::string& name);

struct MeterRecord {
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// Auxiliary measurements (e.g. ||1^low||_inf for Lemma24).
  std::vector<std::pair<std::string, double>> extras;
  /// Outside the inequality's stated range; not counted in the verdict.
  bool excluded = false;
  std::string exclusion_reason;
  /// rhs = 0 with lhs != 0, or a non-finite ratio.
  bool counterexample = false;
};

/// Parameter grid of a sweep. Each meter has its own axes (see
/// default_sweep); the sweep visits their Cartesian product in the order the
/// axes are listed. Data are drawn from `seed`, independently per tuple.
struct MeterSweep {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  int trials = 3;
  CutoffMode mode = CutoffMode::Smooth;
  double stability_factor = 4.0;
};

MeterSweep default_sweep(MeterKind kind);

struct EstimateReport {
  std::string name;
  std::string sample_description;
  MeterSweep sweep;
  std::vector<MeterRecord> records;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  int counterexamples = 0;
  int excluded = 0;
  /// No counterexample and max_ratio <= stability_factor * median_ratio.
  bool stable = false;
};

/// Runs a sweep; tuples are evaluated in parallel and stored in sweep order.
EstimateReport run_meter(MeterKind kind, const MeterSweep& sweep);

/// {"lemma": ..., <params>, "lhs": ..., "rhs": ..., "ratio": ...} per line.
std::string to_json_lines(const EstimateReport& report);

}  // namespace dispersolve
