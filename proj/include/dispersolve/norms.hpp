#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dispersolve/lp_toolkit.hpp"
#include "dispersolve/spectral_grid.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

/// <x> = 1 + |x|.
inline double bracket(double x) { return 1.0 + (x < 0 ? -x : x); }

/// (length sum <xi>^{2s} |u_hat|^2)^{1/2}, conjugate pairs counted twice.
double sobolev(const Field& f, double s);

/// Weighted norm with weight (1 + |xi|^{-1/2}) <xi>^theta. The zero mode must
/// vanish (|u_hat(0)| < 1e-12 ||f||), else ArgumentError.
double lowfreq_weighted(const Field& f, double theta);

/// Weighted space-time l2 of the 2-D spectrum: (vol sum w(xi, tau) |v_hat|^2)^{1/2}.
double spacetime_weighted(const SpaceTimeField& f,
                          const std::function<double(double xi, double tau)>& w2);

/// X^{s,b}: weight <tau - p(xi)>^{2b} <xi>^{2s}.
double bourgain(const SpaceTimeField& f, double s, double b, const SymbolSpec& p);

/// Sum space X^{s-(a+1)/2, b+1/2} + X^{s-(1+a)/8, b+1/8} computed with the
/// pointwise minimum of the two weights. The infimum norm lies between this
/// value / sqrt(2) and this value.
double sum_space(const SpaceTimeField& f, double s, double b, double alpha,
                 const SymbolSpec& p);

/// L^p_t H^s with p = 2 (rectangle rule, dt sum) or p = infinity (max over
/// samples); `p` is 2 or any value >= 1e300 for infinity.
double lp_hs(const SpaceTimeField& f, double p, double s);

/// (sum_N ||P_N f||^2_{L^p_t H^s})^{1/2}. With sharp blocks and mean-zero
/// data the p = 2 value equals lp_hs(f, 2, s).
double tilde_norm(const SpaceTimeField& f, double p, double s,
                  const CutoffBank& bank = CutoffBank(CutoffMode::Sharp));

/// Block decomposition behind tilde_norm: the L^p_t H^s norm of each block.
std::vector<std::pair<double, double>> tilde_blocks(
    const SpaceTimeField& f, double p, double s,
    const CutoffBank& bank = CutoffBank(CutoffMode::Sharp));

/// L-tilde^inf_t of the weighted norm with weight (1 + |xi|^{-1/2}) <xi>^theta.
double tilde_linf_hbar(const SpaceTimeField& f, double theta,
                       const CutoffBank& bank = CutoffBank(CutoffMode::Sharp));

double mass(const Field& f);

/// Conserved energy int |Lambda u|^2 + (orientation/3) int u^3, where
/// Lambda has symbol |p(xi)/xi|^{1/2} and orientation is the sign of p/xi.
/// The cubic term is exact: u is resampled on a grid of 2n points first.
double hamiltonian(const Field& f, const SymbolSpec& p);

enum class NormKind {
  Hs, HbarTheta, Xsb, Fsb, TildeLpHs, LpHs, Ms, Ys, Ztheta, Mtilde12
};

enum class TimeWindow { None, Taper, Rho };

/// Parsed from text such as "Xsb:s=-0.5,b=1", "Ys:s=0,variant=single",
/// "TildeLpHs:p=inf,s=0.5", "Hs:s=1", "Ztheta:theta=0.25", "Mtilde12".
/// Optional key `window` = none | taper | rho for space-time kinds.
struct NormSpec {
  NormKind kind = NormKind::Hs;
  double s = 0.0;
  double b = 0.0;
  double theta = 0.0;
  double p = 2.0;
  bool ys_sum = true;  // Ys: sum space (true) or the single X space
  TimeWindow window = TimeWindow::None;

  static NormSpec parse(std::string_view text);
  std::string to_string() const;
  bool spacetime() const { return kind != NormKind::Hs && kind != NormKind::HbarTheta; }
};

struct NormValue {
  double value = 0.0;
  /// Named constituents of composite norms (e.g. "LinfHs", "Xsb").
  std::vector<std::pair<std::string, double>> parts;
  std::string window;
  std::vector<std::string> warnings;
};

/// Applies a time window: none, a smooth taper over the outer 10% at each end,
/// or the rho_T extension (input must start at t = 0 with duration < 2).
SpaceTimeField apply_window(const SpaceTimeField& f, TimeWindow w);

/// Evaluates a norm on a single snapshot (Hs, HbarTheta) or a trajectory.
NormValue evaluate_norm(const NormSpec& spec, const SpaceTimeField& f,
                        const SymbolSpec& p, double alpha);

}  // namespace dispersolve
