#include "dispersolve/lp_toolkit.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "dispersolve/errors.hpp"
#include "format.hpp"

namespace dispersolve {

bool is_dyadic(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return false;
  int e = 0;
  return std::frexp(x, &e) == 0.5;
}

namespace {

// S(y) = f(y) / (f(y) + f(1-y)), f(y) = exp(-1/y): 0 at y <= 0, 1 at y >= 1,
// every derivative vanishing at both ends.
double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / y);
  const double b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

void require_dyadic(double n, const char* what) {
  if (!is_dyadic(n)) {
    throw ArgumentError(std::string(what) + " must be a power of two, got " +
                        detail::format_double(n));
  }
}

}  // namespace

double smooth_eta(double x) { return 1.0 - smooth_step(std::abs(x) - 1.0); }

double CutoffBank::eta(double x) const {
  if (mode_ == CutoffMode::Sharp) return std::abs(x) < std::numbers::sqrt2 ? 1.0 : 0.0;
  return smooth_eta(x);
}

double CutoffBank::psi(double l, double sigma) const {
  if (l == 0.0) return eta(2.0 * sigma);
  return phi(sigma / l);
}

std::vector<double> dyadic_blocks(const Grid& grid) {
  const double lo = grid.wavenumber(1);
  const double hi = grid.wavenumber(grid.n() / 2);
  const int jmin = static_cast<int>(std::floor(std::log2(lo))) - 1;
  const int jmax = static_cast<int>(std::ceil(std::log2(hi))) + 1;
  std::vector<double> out;
  for (int j = jmin; j <= jmax; ++j) out.push_back(std::ldexp(1.0, j));
  return out;
}

struct SpaceTimeField::Cache {
  std::once_flag once;
  Spectrum spectrum;
};

SpaceTimeField::SpaceTimeField(Grid grid, double t0, double dt, int m,
                               std::vector<double> values)
    : grid_(grid), t0_(t0), dt_(dt), m_(m), values_(std::move(values)),
      cache_(std::make_shared<Cache>()) {
  if (m < 8) throw ArgumentError("space-time field needs at least 8 time samples");
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (values_.size() != static_cast<std::size_t>(m) * grid.n()) {
    throw ArgumentError("space-time values have the wrong size");
  }
}

SpaceTimeField SpaceTimeField::from_function(
    Grid grid, double t0, double dt, int m,
    const std::function<double(double, double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(m) * grid.n());
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < grid.n(); ++i) {
      v[static_cast<std::size_t>(j) * grid.n() + i] = f(t0 + j * dt, grid.x(i));
    }
  }
  return SpaceTimeField(grid, t0, dt, m, std::move(v));
}

SpaceTimeField SpaceTimeField::from_snapshots(const std::vector<Field>& snaps,
                                              double t0, double dt) {
  if (snaps.empty()) throw ArgumentError("no snapshots");
  const Grid g = snaps.front().grid();
  std::vector<double> v;
  v.reserve(snaps.size() * g.n());
  for (const auto& s : snaps) {
    if (!(s.grid() == g)) throw ArgumentError("snapshots on different grids");
    v.insert(v.end(), s.values().begin(), s.values().end());
  }
  return SpaceTimeField(g, t0, dt, static_cast<int>(snaps.size()), std::move(v));
}

SpaceTimeField SpaceTimeField::from_spectrum(Grid grid, double t0, double dt,
                                             int m, Spectrum spectrum) {
  auto values = inverse_transform2d(m, grid.n(), spectrum);
  return SpaceTimeField(grid, t0, dt, m, std::move(values));
}

Field SpaceTimeField::snapshot(int j) const {
  auto first = values_.begin() + static_cast<std::ptrdiff_t>(j) * grid_.n();
  return Field::from_values(grid_, std::vector<double>(first, first + grid_.n()));
}

double SpaceTimeField::tau(int a) const {
  const int signed_a = 2 * a <= m_ ? a : a - m_;
  return -2.0 * std::numbers::pi * signed_a / (m_ * dt_);
}

const Spectrum& SpaceTimeField::spectrum() const {
  std::call_once(cache_->once, [this] {
    cache_->spectrum = transform2d(m_, grid_.n(), values_);
  });
  return cache_->spectrum;
}

double SpaceTimeField::l2() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * grid_.dx() * dt_);
}

SpaceTimeField apply_spacetime_multiplier(const SpaceTimeField& f,
                                          const SpaceTimeWeight& w) {
  const Grid& g = f.grid();
  const int half = g.half();
  const int m = f.m();
  Spectrum s = f.spectrum();
  for (int a = 0; a < m; ++a) {
    const bool time_nyquist = m % 2 == 0 && 2 * a == m;
    const double tau = f.tau(a);
    for (int k = 0; k < half; ++k) {
      auto& c = s[static_cast<std::size_t>(a) * half + k];
      if (time_nyquist || 2 * k == g.n()) {
        c = 0.0;
      } else {
        c *= w(g.wavenumber(k), tau);
      }
    }
  }
  return SpaceTimeField::from_spectrum(g, f.t0(), f.dt(), m, std::move(s));
}

Field project_space(const Field& f, double n, const CutoffBank& bank) {
  require_dyadic(n, "N");
  return apply_multiplier(f, [&](double xi) { return Complex(bank.phi_n(xi, n)); });
}

Field project_space_low(const Field& f, double n, const CutoffBank& bank) {
  require_dyadic(n, "N");
  return apply_multiplier(f, [&](double xi) { return Complex(bank.low(n, xi)); });
}

Field project_space_high(const Field& f, double n, const CutoffBank& bank) {
  require_dyadic(n, "N");
  return apply_multiplier(f, [&](double xi) { return Complex(bank.high(n, xi)); });
}

SpaceTimeField project_space(const SpaceTimeField& f, double n,
                             const CutoffBank& bank) {
  require_dyadic(n, "N");
  // purely spatial: applied per time sample, leaving the time axis untouched
  std::vector<double> v;
  v.reserve(f.values().size());
  for (int j = 0; j < f.m(); ++j) {
    const Field p = project_space(f.snapshot(j), n, bank);
    v.insert(v.end(), p.values().begin(), p.values().end());
  }
  return SpaceTimeField(f.grid(), f.t0(), f.dt(), f.m(), std::move(v));
}

namespace {

std::optional<std::string> resolution_warning(const SpaceTimeField& f, double l) {
  const double dtau = 2.0 * std::numbers::pi / (f.m() * f.dt());
  const double tau_max = std::numbers::pi / f.dt();
  const double band = l == 0.0 ? 0.5 : l;
  if (band < 2.0 * dtau) {
    return "time window too short: band " + detail::format_double(l) +
           " is narrower than two frequency bins (" +
           detail::format_double(dtau) + ")";
  }
  if (2.0 * band > tau_max) {
    return "time step too coarse: band " + detail::format_double(l) +
           " exceeds the resolved frequency range";
  }
  return std::nullopt;
}

ModulationProjection modulation(const SpaceTimeField& f, double l,
                                const SymbolSpec& p,
                                const std::function<double(double)>& weight) {
  if (l != 0.0) require_dyadic(l, "L");
  auto out = apply_spacetime_multiplier(f, [&](double xi, double tau) {
    return Complex(weight(tau - eval_dispersion(p, xi)));
  });
  return {std::move(out), resolution_warning(f, l)};
}

}  // namespace

ModulationProjection project_modulation(const SpaceTimeField& f, double l,
                                        const SymbolSpec& p,
                                        const CutoffBank& bank) {
  return modulation(f, l, p, [&](double s) { return bank.psi(l, s); });
}

ModulationProjection project_modulation_low(const SpaceTimeField& f, double l,
                                            const SymbolSpec& p,
                                            const CutoffBank& bank) {
  if (l == 0.0) return project_modulation(f, 0.0, p, bank);
  return modulation(f, l, p, [&](double s) { return bank.low(l, s); });
}

ModulationProjection project_modulation_high(const SpaceTimeField& f, double l,
                                             const SymbolSpec& p,
                                             const CutoffBank& bank) {
  if (l == 0.0) throw ArgumentError("Q_{>=L} needs L >= 1");
  return modulation(f, l, p, [&](double s) { return bank.high(l, s); });
}

IndicatorSplit decompose_indicator(double t_len, double r, double t0, double dt,
                                   int m) {
  if (!(t_len > 0.0) || !(r > 0.0) || !(dt > 0.0) || m < 8) {
    throw ArgumentError("decompose_indicator: T, R, dt must be positive");
  }
  if (m * dt < 4.0 * t_len) {
    throw ArgumentError("decompose_indicator: window " +
                        detail::format_double(m * dt) +
                        " is shorter than 4T; periodization error");
  }
  if (t0 > 0.0 || t0 + (m - 1) * dt < t_len) {
    throw ArgumentError("decompose_indicator: window does not contain [0, T]");
  }
  IndicatorSplit out;
  out.t0 = t0;
  out.dt = dt;
  out.indicator.resize(m);
  const double tol = 1e-9 * dt;
  for (int j = 0; j < m; ++j) {
    const double t = t0 + j * dt;
    out.indicator[j] = (t >= -tol && t <= t_len + tol) ? 1.0 : 0.0;
  }
  Spectrum s = transform2d(1, m, out.indicator);
  for (int a = 0; a < static_cast<int>(s.size()); ++a) {
    const double tau = 2.0 * std::numbers::pi * a / (m * dt);
    s[a] *= smooth_eta(tau / r);
  }
  out.low = inverse_transform2d(1, m, s);
  out.high.resize(m);
  for (int j = 0; j < m; ++j) out.high[j] = out.indicator[j] - out.low[j];
  return out;
}

SpaceTimeField extension_rho(const SpaceTimeField& u) {
  const double dt = u.dt();
  const long long last = u.m() - 1;
  const double t_len = last * dt;
  if (std::abs(u.t0()) > 1e-12 * dt) {
    throw ArgumentError("extension_rho: input must start at t = 0");
  }
  if (!(t_len > 0.0 && t_len < 2.0)) {
    throw ArgumentError("extension_rho: T must lie in (0, 2), got " +
                        detail::format_double(t_len));
  }
  long long m = 8;
  while ((m / 2 - 1) * dt < 2.0) m *= 2;
  if (m > (1LL << 26)) throw ArgumentError("extension_rho: time step too small");
  const int n = u.grid().n();
  std::vector<double> v(static_cast<std::size_t>(m) * n, 0.0);
  for (long long j = 0; j < m; ++j) {
    const long long q = j - m / 2;  // t = q dt
    const double eta = smooth_eta(q * dt);
    if (eta == 0.0) continue;
    // index of T mu(t/T) on the input grid
    long long src = 0;
    if (q > 0 && q <= last) src = q;
    else if (q > last && q <= 2 * last) src = 2 * last - q;
    for (int i = 0; i < n; ++i) {
      v[static_cast<std::size_t>(j) * n + i] = eta * u.at(static_cast<int>(src), i);
    }
  }
  return SpaceTimeField(u.grid(), -(m / 2) * dt, dt, static_cast<int>(m),
                        std::move(v));
}

namespace {

// Signed dealiased spectrum, index k + K for k in [-K, K].
std::vector<Complex> signed_spectrum(const Field& f) {
  const int kmax = f.grid().dealias_cutoff();
  std::vector<Complex> out(2 * kmax + 1);
  const auto& s = f.spectrum();
  for (int k = 0; k <= kmax; ++k) {
    out[kmax + k] = s[k];
    out[kmax - k] = std::conj(s[k]);
  }
  return out;
}

}  // namespace

Field pseudo_product(const Field& f, const Field& g, const PseudoWeight& chi) {
  if (!(f.grid() == g.grid())) throw ArgumentError("fields on different grids");
  const Grid& grid = f.grid();
  const int kmax = grid.dealias_cutoff();
  const auto fs = signed_spectrum(f);
  const auto gs = signed_spectrum(g);
  Spectrum out(grid.half());
  for (int k = 0; k <= kmax; ++k) {
    const double xi = grid.wavenumber(k);
    Complex acc = 0.0;
    for (int k1 = std::max(-kmax, k - kmax); k1 <= std::min(kmax, k + kmax); ++k1) {
      acc += fs[kmax + k1] * gs[kmax + k - k1] * chi(xi, grid.wavenumber(k1));
    }
    out[k] = acc;
  }
  return Field::from_spectrum(grid, std::move(out));
}

PseudoWeight adjoint_weight(PseudoWeight chi) {
  return [chi = std::move(chi)](double eta, double eta1) {
    return chi(eta1 - eta, -eta);
  };
}

double trilinear_slice(const Field& f, const Field& g, const Field& h,
                       const PseudoWeight& chi) {
  const Field p = pseudo_product(f, g, chi);
  const auto& a = p.spectrum();
  const auto& b = h.spectrum();
  double s = 0.0;
  for (int k = 0; k <= f.grid().dealias_cutoff(); ++k) {
    s += pair_count(k, f.grid().n()) * (a[k] * std::conj(b[k])).real();
  }
  return f.grid().length() * s;
}

double trilinear_It(const SpaceTimeField& u1, const SpaceTimeField& u2,
                    const SpaceTimeField& u3, double t, const PseudoWeight& chi) {
  if (!(u1.grid() == u2.grid() && u2.grid() == u3.grid()) || u1.m() != u2.m() ||
      u2.m() != u3.m() || u1.dt() != u2.dt() || u2.dt() != u3.dt() ||
      u1.t0() != u2.t0() || u2.t0() != u3.t0()) {
    throw ArgumentError("trilinear_It: trajectories on different grids");
  }
  const double t0 = u1.t0(), dt = u1.dt();
  const double t_last = u1.time(u1.m() - 1);
  if (t < t0 - 1e-12 * dt || t > t_last + 1e-12 * dt) {
    throw ArgumentError("trilinear_It: t = " + detail::format_double(t) +
                        " is outside the time window");
  }
  auto integrand = [&](int j) {
    return trilinear_slice(u1.snapshot(j), u2.snapshot(j), u3.snapshot(j), chi);
  };
  const double pos = (t - t0) / dt;
  const int whole = std::min(static_cast<int>(std::floor(pos + 1e-12)), u1.m() - 1);
  double acc = 0.0;
  double prev = integrand(0);
  for (int j = 1; j <= whole; ++j) {
    const double cur = integrand(j);
    acc += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  const double frac = pos - whole;
  if (frac > 1e-12 && whole + 1 < u1.m()) {
    const double next = integrand(whole + 1);
    const double mid = prev + frac * (next - prev);
    acc += 0.5 * frac * dt * (prev + mid);
  }
  return acc;
}

}  // namespace dispersolve
