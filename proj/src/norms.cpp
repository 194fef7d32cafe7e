#include "dispersolve/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dispersolve/errors.hpp"
#include "format.hpp"
#include "keyvalue.hpp"

namespace dispersolve {

using detail::format_double;

namespace {

bool is_infinite_exponent(double p) { return p >= 1e300; }

double weighted_sum(const Field& f, const std::function<double(double)>& w2) {
  const Grid& g = f.grid();
  const auto& s = f.spectrum();
  double acc = 0.0;
  for (int k = 0; k < g.half(); ++k) {
    const double c = std::norm(s[k]);
    if (c == 0.0) continue;
    acc += pair_count(k, g.n()) * w2(g.wavenumber(k)) * c;
  }
  return g.length() * acc;
}

}  // namespace

double sobolev(const Field& f, double s) {
  return std::sqrt(weighted_sum(f, [s](double xi) { return std::pow(bracket(xi), 2.0 * s); }));
}

double lowfreq_weighted(const Field& f, double theta) {
  const double norm = std::sqrt(f.l2_squared());
  const double c0 = std::abs(f.spectrum()[0]);
  if (c0 > 1e-12 * norm && c0 > 0.0) {
    throw ArgumentError("lowfreq_weighted: nonzero mean, u_hat(0) = " +
                        format_double(f.spectrum()[0].real()));
  }
  return std::sqrt(weighted_sum(f, [theta](double xi) {
    if (xi == 0.0) return 0.0;
    const double w = (1.0 + 1.0 / std::sqrt(std::abs(xi))) * std::pow(bracket(xi), theta);
    return w * w;
  }));
}

double spacetime_weighted(const SpaceTimeField& f,
                          const std::function<double(double, double)>& w2) {
  const Grid& g = f.grid();
  const int half = g.half();
  const auto& s = f.spectrum();
  double acc = 0.0;
  for (int a = 0; a < f.m(); ++a) {
    const double tau = f.tau(a);
    for (int k = 0; k < half; ++k) {
      const double c = std::norm(s[static_cast<std::size_t>(a) * half + k]);
      if (c == 0.0) continue;
      acc += pair_count(k, g.n()) * w2(g.wavenumber(k), tau) * c;
    }
  }
  return std::sqrt(f.volume() * acc);
}

namespace {

double x_weight2(double xi, double tau, double s, double b, const SymbolSpec& p) {
  const double sigma = tau - eval_dispersion(p, xi);
  return std::pow(bracket(sigma), 2.0 * b) * std::pow(bracket(xi), 2.0 * s);
}

}  // namespace

double bourgain(const SpaceTimeField& f, double s, double b, const SymbolSpec& p) {
  return spacetime_weighted(f, [&](double xi, double tau) {
    return x_weight2(xi, tau, s, b, p);
  });
}

double sum_space(const SpaceTimeField& f, double s, double b, double alpha,
                 const SymbolSpec& p) {
  const double sa = s - (alpha + 1.0) / 2.0, ba = b + 0.5;
  const double sb = s - (1.0 + alpha) / 8.0, bb = b + 0.125;
  return spacetime_weighted(f, [&](double xi, double tau) {
    return std::min(x_weight2(xi, tau, sa, ba, p), x_weight2(xi, tau, sb, bb, p));
  });
}

double lp_hs(const SpaceTimeField& f, double p, double s) {
  if (is_infinite_exponent(p)) {
    double m = 0.0;
    for (int j = 0; j < f.m(); ++j) m = std::max(m, sobolev(f.snapshot(j), s));
    return m;
  }
  if (p != 2.0) throw ArgumentError("lp_hs supports p = 2 and p = inf");
  double acc = 0.0;
  for (int j = 0; j < f.m(); ++j) acc += std::pow(sobolev(f.snapshot(j), s), 2);
  return std::sqrt(f.dt() * acc);
}

std::vector<std::pair<double, double>> tilde_blocks(const SpaceTimeField& f,
                                                    double p, double s,
                                                    const CutoffBank& bank) {
  std::vector<std::pair<double, double>> out;
  for (double n : dyadic_blocks(f.grid())) {
    out.emplace_back(n, lp_hs(project_space(f, n, bank), p, s));
  }
  return out;
}

double tilde_norm(const SpaceTimeField& f, double p, double s,
                  const CutoffBank& bank) {
  double acc = 0.0;
  for (const auto& [n, v] : tilde_blocks(f, p, s, bank)) acc += v * v;
  return std::sqrt(acc);
}

double tilde_linf_hbar(const SpaceTimeField& f, double theta,
                       const CutoffBank& bank) {
  double acc = 0.0;
  for (double n : dyadic_blocks(f.grid())) {
    const auto block = project_space(f, n, bank);
    double m = 0.0;
    for (int j = 0; j < block.m(); ++j) {
      m = std::max(m, lowfreq_weighted(block.snapshot(j), theta));
    }
    acc += m * m;
  }
  return std::sqrt(acc);
}

double mass(const Field& f) { return f.l2_squared(); }

double hamiltonian(const Field& f, const SymbolSpec& p) {
  const Grid& g = f.grid();
  const double slope0 = dispersion_slope_at_zero(p);
  const double quad = weighted_sum(f, [&](double xi) {
    return xi == 0.0 ? slope0 : std::abs(eval_dispersion(p, xi) / xi);
  });
  // resample on 2n points: the cubic has modes up to 3n/2 < 2n
  const Grid fine(g.length(), 2 * g.n());
  Spectrum padded(fine.half());
  for (int k = 0; k < g.half(); ++k) padded[k] = f.spectrum()[k];
  padded[g.n() / 2] *= 0.5;
  const auto u = Field::from_spectrum(fine, std::move(padded));
  double cubic = 0.0;
  for (double v : u.values()) cubic += v * v * v;
  cubic *= fine.dx();
  return quad + p.orientation() * cubic / 3.0;
}

NormSpec NormSpec::parse(std::string_view text) {
  const auto kv = detail::parse_key_values(text);
  NormSpec out;
  auto window = [&]() {
    if (!kv.has("window")) return TimeWindow::None;
    const auto w = kv.text("window");
    if (w == "none") return TimeWindow::None;
    if (w == "taper") return TimeWindow::Taper;
    if (w == "rho") return TimeWindow::Rho;
    throw ArgumentError("unknown time window '" + w + "' (none, taper, rho)");
  };
  auto exponent = [&]() {
    const auto t = kv.text("p");
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    const double v = kv.number("p");
    if (v != 2.0) throw ArgumentError("p must be 2 or inf");
    return v;
  };
  const auto& n = kv.name;
  if (n == "Hs") {
    kv.only("s");
    out.kind = NormKind::Hs;
    out.s = kv.number("s");
  } else if (n == "HbarTheta") {
    kv.only("theta");
    out.kind = NormKind::HbarTheta;
    out.theta = kv.number("theta");
  } else if (n == "Xsb" || n == "Fsb") {
    kv.only("s", "b", "window");
    out.kind = n == "Xsb" ? NormKind::Xsb : NormKind::Fsb;
    out.s = kv.number("s");
    out.b = kv.number("b");
  } else if (n == "TildeLpHs" || n == "LpHs") {
    kv.only("p", "s", "window");
    out.kind = n == "LpHs" ? NormKind::LpHs : NormKind::TildeLpHs;
    out.p = exponent();
    out.s = kv.number("s");
  } else if (n == "Ms") {
    kv.only("s", "window");
    out.kind = NormKind::Ms;
    out.s = kv.number("s");
  } else if (n == "Ys") {
    kv.only("s", "variant", "window");
    out.kind = NormKind::Ys;
    out.s = kv.number("s");
    if (kv.has("variant")) {
      const auto v = kv.text("variant");
      if (v != "sum" && v != "single") {
        throw ArgumentError("Ys variant must be 'sum' or 'single'");
      }
      out.ys_sum = v == "sum";
    }
  } else if (n == "Ztheta") {
    kv.only("theta", "window");
    out.kind = NormKind::Ztheta;
    out.theta = kv.number("theta");
  } else if (n == "Mtilde12") {
    kv.only("window");
    out.kind = NormKind::Mtilde12;
  } else {
    throw ArgumentError("unknown norm '" + n + "'");
  }
  out.window = window();
  return out;
}

std::string NormSpec::to_string() const {
  auto p_text = [&]() { return std::isinf(p) ? std::string("inf") : format_double(p); };
  std::string out;
  switch (kind) {
    case NormKind::Hs: return "Hs:s=" + format_double(s);
    case NormKind::HbarTheta: return "HbarTheta:theta=" + format_double(theta);
    case NormKind::Xsb: out = "Xsb:s=" + format_double(s) + ",b=" + format_double(b); break;
    case NormKind::Fsb: out = "Fsb:s=" + format_double(s) + ",b=" + format_double(b); break;
    case NormKind::TildeLpHs: out = "TildeLpHs:p=" + p_text() + ",s=" + format_double(s); break;
    case NormKind::LpHs: out = "LpHs:p=" + p_text() + ",s=" + format_double(s); break;
    case NormKind::Ms: out = "Ms:s=" + format_double(s); break;
    case NormKind::Ys:
      out = "Ys:s=" + format_double(s) + ",variant=" + (ys_sum ? "sum" : "single");
      break;
    case NormKind::Ztheta: out = "Ztheta:theta=" + format_double(theta); break;
    case NormKind::Mtilde12: out = "Mtilde12"; break;
  }
  if (window != TimeWindow::None) {
    out += (out.find(':') == std::string::npos ? ":" : ",");
    out += window == TimeWindow::Taper ? "window=taper" : "window=rho";
  }
  return out;
}

SpaceTimeField apply_window(const SpaceTimeField& f, TimeWindow w) {
  if (w == TimeWindow::None) return f;
  if (w == TimeWindow::Rho) return extension_rho(f);
  const double t_first = f.time(0), t_last = f.time(f.m() - 1);
  const double ramp = 0.1 * (t_last - t_first);
  // S(y) = 1 - eta(1 + y) on [0, 1]
  auto rise = [](double y) { return 1.0 - smooth_eta(1.0 + std::clamp(y, 0.0, 1.0)); };
  std::vector<double> v = f.values();
  const int n = f.grid().n();
  for (int j = 0; j < f.m(); ++j) {
    const double t = f.time(j);
    const double w = rise((t - t_first) / ramp) * rise((t_last - t) / ramp);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(j) * n + i] *= w;
  }
  return SpaceTimeField(f.grid(), f.t0(), f.dt(), f.m(), std::move(v));
}

namespace {

std::string window_name(TimeWindow w) {
  switch (w) {
    case TimeWindow::None: return "none";
    case TimeWindow::Taper: return "taper";
    case TimeWindow::Rho: return "rho";
  }
  return "?";
}

double max_over_time(const SpaceTimeField& f, const std::function<double(const Field&)>& g) {
  double m = 0.0;
  for (int j = 0; j < f.m(); ++j) m = std::max(m, g(f.snapshot(j)));
  return m;
}

}  // namespace

NormValue evaluate_norm(const NormSpec& spec, const SpaceTimeField& f,
                        const SymbolSpec& p, double alpha) {
  NormValue out;
  out.window = window_name(spec.window);
  const double inf = std::numeric_limits<double>::infinity();
  switch (spec.kind) {
    case NormKind::Hs: {
      out.value = max_over_time(f, [&](const Field& u) { return sobolev(u, spec.s); });
      out.parts = {{"initial", sobolev(f.snapshot(0), spec.s)},
                   {"final", sobolev(f.snapshot(f.m() - 1), spec.s)}};
      out.window = "max over time samples";
      return out;
    }
    case NormKind::HbarTheta: {
      auto g = [&](const Field& u) { return lowfreq_weighted(u, spec.theta); };
      out.value = max_over_time(f, g);
      out.parts = {{"initial", g(f.snapshot(0))}, {"final", g(f.snapshot(f.m() - 1))}};
      out.window = "max over time samples";
      return out;
    }
    case NormKind::LpHs:
      out.value = lp_hs(apply_window(f, spec.window), spec.p, spec.s);
      return out;
    case NormKind::TildeLpHs:
      out.value = tilde_norm(apply_window(f, spec.window), spec.p, spec.s);
      return out;
    default:
      break;
  }
  const auto w = apply_window(f, spec.window);
  if (spec.window == TimeWindow::None) {
    out.warnings.push_back(
        "no time window: the periodized trajectory may jump at the window ends");
  }
  switch (spec.kind) {
    case NormKind::Xsb:
      out.value = bourgain(w, spec.s, spec.b, p);
      break;
    case NormKind::Fsb:
      out.value = sum_space(w, spec.s, spec.b, alpha, p);
      break;
    case NormKind::Ms: {
      const double a = lp_hs(f, inf, spec.s);
      const double b = bourgain(w, spec.s - 1.0, 1.0, p);
      out.parts = {{"LinfHs", a}, {"Xsb", b}};
      out.value = a + b;
      break;
    }
    case NormKind::Ys: {
      const double a = lp_hs(f, inf, spec.s);
      const double b = spec.ys_sum ? sum_space(w, spec.s, 0.5, alpha, p)
                                   : bourgain(w, spec.s - (alpha + 1.0) / 2.0, 1.0, p);
      out.parts = {{"LinfHs", a}, {spec.ys_sum ? "Fsb" : "Xsb", b}};
      out.value = a + b;
      break;
    }
    case NormKind::Ztheta: {
      const double a = tilde_linf_hbar(f, spec.theta);
      const double b = sum_space(w, spec.theta, 0.5, alpha, p);
      out.parts = {{"TildeLinfHbar", a}, {"Fsb", b}};
      out.value = a + b;
      break;
    }
    case NormKind::Mtilde12: {
      const double a = tilde_norm(f, inf, 0.5);
      const double b = bourgain(w, -0.5, 1.0, p);
      out.parts = {{"TildeLinfHs", a}, {"Xsb", b}};
      out.value = a + b;
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace dispersolve
