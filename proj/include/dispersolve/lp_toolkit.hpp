#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dispersolve/spectral_grid.hpp"
#include "dispersolve/symbols.hpp"

namespace dispersolve {

/// True when x = 2^j for some integer j (negative j allowed).
bool is_dyadic(double x);

enum class CutoffMode { Smooth, Sharp };

/// Dyadic cutoffs built from one even bump eta:
///   phi(x) = eta(x) - eta(2x),  phi_N(xi) = phi(xi/N),
///   psi_0(sigma) = eta(2 sigma),  psi_L(sigma) = phi(sigma/L) for L >= 1.
/// Smooth mode: eta = 1 on [-1,1], 0 outside (-2,2), C-infinity in between.
/// Sharp mode: eta is the indicator of |x| < sqrt(2), so phi_N is the
/// indicator of N/sqrt(2) <= |xi| < sqrt(2) N.
class CutoffBank {
 public:
  explicit CutoffBank(CutoffMode mode = CutoffMode::Smooth) : mode_(mode) {}

  CutoffMode mode() const { return mode_; }
  double eta(double x) const;
  double phi(double x) const { return eta(x) - eta(2.0 * x); }
  double phi_n(double xi, double n) const { return phi(xi / n); }
  /// Modulation band; L = 0 selects psi_0.
  double psi(double l, double sigma) const;
  /// eta(x/N): the sum of phi_M over dyadic M <= N (plus psi_0 for
  /// modulations).
  double low(double n, double x) const { return eta(x / n); }
  /// 1 - eta(2x/N): the sum of phi_M over dyadic M >= N.
  double high(double n, double x) const { return 1.0 - eta(2.0 * x / n); }

 private:
  CutoffMode mode_;
};

/// Smooth bump used by the smooth bank, exposed for the time cutoffs.
double smooth_eta(double x);

/// Dyadic N = 2^j, j in [jmin, jmax], whose blocks cover every nonzero
/// wavenumber of the grid.
std::vector<double> dyadic_blocks(const Grid& grid);

/// Uniformly sampled real trajectory v(t_j, x), t_j = t0 + j dt, j < m.
///
/// Space-time convention: v = sum v_hat(tau, xi) exp(i(xi x - tau (t - t0))),
/// so free waves sit on tau = p(xi). Spectrum layout is m x (n/2+1).
class SpaceTimeField {
 public:
  SpaceTimeField(Grid grid, double t0, double dt, int m,
                 std::vector<double> values);
  static SpaceTimeField from_function(
      Grid grid, double t0, double dt, int m,
      const std::function<double(double t, double x)>& f);
  static SpaceTimeField from_snapshots(const std::vector<Field>& snaps,
                                       double t0, double dt);
  static SpaceTimeField from_spectrum(Grid grid, double t0, double dt, int m,
                                      Spectrum spectrum);

  const Grid& grid() const { return grid_; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  int m() const { return m_; }
  double time(int j) const { return t0_ + j * dt_; }
  const std::vector<double>& values() const { return values_; }
  double at(int j, int i) const {
    return values_[static_cast<std::size_t>(j) * grid_.n() + i];
  }
  Field snapshot(int j) const;
  /// Temporal angular frequency of spectrum row a.
  double tau(int a) const;
  /// Cached 2-D spectrum.
  const Spectrum& spectrum() const;
  /// (dx dt sum v^2)^{1/2}: the space-time L2 norm with the rectangle rule.
  double l2() const;
  /// length * m * dt, the factor relating spectral sums to integrals.
  double volume() const { return grid_.length() * m_ * dt_; }

 private:
  Grid grid_;
  double t0_, dt_;
  int m_;
  std::vector<double> values_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

using SpaceTimeWeight = std::function<Complex(double xi, double tau)>;

/// Multiplies the 2-D spectrum by w(xi, tau); both Nyquist lines are zeroed.
SpaceTimeField apply_spacetime_multiplier(const SpaceTimeField& f,
                                          const SpaceTimeWeight& w);

Field project_space(const Field& f, double n, const CutoffBank& bank = CutoffBank());
Field project_space_low(const Field& f, double n, const CutoffBank& bank = CutoffBank());
Field project_space_high(const Field& f, double n, const CutoffBank& bank = CutoffBank());
SpaceTimeField project_space(const SpaceTimeField& f, double n,
                             const CutoffBank& bank = CutoffBank());

struct ModulationProjection {
  SpaceTimeField field;
  /// Set when the time window is too short to resolve the band.
  std::optional<std::string> warning;
};

/// Q_L with sigma = tau - p(xi). L = 0 is the psi_0 band.
ModulationProjection project_modulation(const SpaceTimeField& f, double l,
                                        const SymbolSpec& p,
                                        const CutoffBank& bank = CutoffBank());
/// Q_{<=L} = psi_0 + sum_{1 <= M <= L} psi_M.
ModulationProjection project_modulation_low(const SpaceTimeField& f, double l,
                                            const SymbolSpec& p,
                                            const CutoffBank& bank = CutoffBank());
/// Q_{>=L} = sum_{M >= L} psi_M.
ModulationProjection project_modulation_high(const SpaceTimeField& f, double l,
                                             const SymbolSpec& p,
                                             const CutoffBank& bank = CutoffBank());

struct IndicatorSplit {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> indicator;  // 1 on [0, T]
  std::vector<double> low;        // F^{-1}(eta(tau/R) F 1_T)
  std::vector<double> high;       // indicator - low
};

/// Splits the indicator of [0, T] on the time grid t0 + j dt (j < m). The
/// window m dt must be at least 4T and contain [0, T].
IndicatorSplit decompose_indicator(double t_len, double r, double t0, double dt,
                                   int m);

/// rho_T u(t) = eta(t) u(T mu(t/T)), mu(t) = max(1 - |t - 1|, 0), for u sampled
/// on [0, T] (t0 = 0, T = (m-1) dt). The output shares dt, is anchored so
/// that t = 0 is a sample, and covers [-2, 2].
SpaceTimeField extension_rho(const SpaceTimeField& u);

using PseudoWeight = std::function<Complex(double xi, double xi1)>;

/// F(Pi(f,g))(xi) = sum_{xi1} f_hat(xi1) g_hat(xi - xi1) chi(xi, xi1) over
/// the dealiased spectra, output truncated to |k| <= n/3. O(n^2).
Field pseudo_product(const Field& f, const Field& g, const PseudoWeight& chi);

/// chi'(eta, eta1) = chi(eta1 - eta, -eta), so that
/// int Pi_chi(f,g) h = int f Pi_chi'(g,h).
PseudoWeight adjoint_weight(PseudoWeight chi);

/// int_{t0}^{t} int Pi_chi(u1,u2) u3 dx dt', trapezoid rule in time with the
/// integrand linearly interpolated at t.
double trilinear_It(const SpaceTimeField& u1, const SpaceTimeField& u2,
                    const SpaceTimeField& u3, double t, const PseudoWeight& chi);

/// int Pi_chi(f,g) h dx for one time slice.
double trilinear_slice(const Field& f, const Field& g, const Field& h,
                       const PseudoWeight& chi);

}  // namespace dispersolve
