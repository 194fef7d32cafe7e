#include "dispersolve/meters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/norms.hpp"
#include "dispersolve/random.hpp"
#include "dispersolve/spectral_grid.hpp"
#include "format.hpp"
#include "work_pool.hpp"

namespace dispersolve {

namespace {

constexpr double kPi = std::numbers::pi;

using Params = std::vector<std::pair<std::string, double>>;

double param(const Params& p, const std::string& key) {
  for (const auto& [k, v] : p) {
    if (k == key) return v;
  }
  throw ArgumentError("meter parameter '" + key + "' missing");
}

int pow2_at_least(double x) {
  int n = 8;
  while (n < x) n *= 2;
  return n;
}

// Random wave packet at spatial frequency N centred at x0: coefficients
// a_k phi_N(xi) exp(-i xi x0) with a_k uniform in [1/2, 1].
Field packet(const Grid& g, double n_block, double x0, Rng& rng, const CutoffBank& bank) {
  Spectrum s(g.half());
  for (int k = 1; k < g.n() / 2; ++k) {
    const double xi = g.wavenumber(k);
    const double a = rng.uniform(0.5, 1.0);
    const double c = bank.phi_n(xi, n_block);
    if (c != 0.0) s[k] = a * c * std::polar(1.0, -xi * x0);
  }
  return Field::from_spectrum(g, std::move(s));
}

// Random space-time data supported where band(xi, sigma) != 0, sigma = tau - p(xi);
// no mean, no Nyquist lines.
SpaceTimeField random_band(const Grid& g, double t0, double dt, int m, const SymbolSpec& p,
                           Rng& rng, const std::function<double(double, double)>& band) {
  const int half = g.half();
  Spectrum s(static_cast<std::size_t>(m) * half);
  for (int a = 0; a < m; ++a) {
    if (2 * a == m) continue;
    // row a carries exp(-i tau t) with tau = -2 pi a_signed / (m dt)
    const double tau = -(2 * a < m ? a : a - m) * 2.0 * kPi / (m * dt);
    for (int k = 1; k + 1 < half; ++k) {
      const double xi = g.wavenumber(k);
      const double re = rng.uniform(-1.0, 1.0), im = rng.uniform(-1.0, 1.0);
      const double w = band(xi, tau - p(xi));
      if (w != 0.0) s[static_cast<std::size_t>(a) * half + k] = w * Complex(re, im);
    }
  }
  return SpaceTimeField::from_spectrum(g, t0, dt, m, std::move(s));
}

struct Measured {
  double lhs = 0.0, rhs = 0.0;
  Params extras;
};

MeterRecord finish(Params params, const Measured& m) {
  MeterRecord r;
  r.params = std::move(params);
  r.lhs = m.lhs;
  r.rhs = m.rhs;
  r.extras = m.extras;
  if (m.rhs == 0.0) {
    r.ratio = m.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.ratio = m.lhs / m.rhs;
  }
  r.counterexample = !std::isfinite(r.ratio) || !std::isfinite(m.lhs) || !std::isfinite(m.rhs);
  return r;
}

MeterRecord excluded(Params params, std::string why) {
  MeterRecord r;
  r.params = std::move(params);
  r.excluded = true;
  r.exclusion_reason = std::move(why);
  return r;
}

// ---- individual meters ----------------------------------------------------

// f3 is the maximizer of the left side for given f1, f2: the real field
// P_{N3} Pi(f1, f2).
MeterRecord est_pi(const Params& prm, const MeterSweep& sw, std::uint64_t seed) {
  const double n1 = param(prm, "n1"), n2 = param(prm, "n2"), n3 = param(prm, "n3");
  if (!(n1 <= n2)) return excluded(prm, "needs n1 <= n2");
  {
    std::array<double, 3> sorted{n1, n2, n3};
    std::sort(sorted.begin(), sorted.end());
    if (sorted[2] > 2 * sorted[1]) return excluded(prm, "largest scale not comparable to the middle one");
  }
  const double length = 2 * kPi * param(prm, "periods");
  const double dk = 2 * kPi / length;
  const Grid g(length, pow2_at_least(3.0 * 2.0 * (n1 + n2) / dk + 3));
  const CutoffBank bank(sw.mode);
  const PseudoWeight chi = [](double, double) { return Complex(1.0); };
  Rng rng(seed);
  Measured best;
  double best_ratio = -1;
  for (int t = 0; t < sw.trials; ++t) {
    const double x0 = rng.uniform(0.0, length);
    const Field f1 = packet(g, n1, x0, rng, bank);
    const Field f2 = packet(g, n2, x0, rng, bank);
    const Field f3 = project_space(pseudo_product(f1, f2, chi), n3, bank);
    Measured m;
    m.lhs = std::abs(trilinear_slice(f1, f2, f3, chi));
    m.rhs = std::sqrt(std::min({n1, n2, n3})) *
            std::sqrt(f1.l2_squared() * f2.l2_squared() * f3.l2_squared());
    const double ratio = m.rhs > 0 ? m.lhs / m.rhs : 0.0;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = m;
    }
  }
  return finish(prm, best);
}

MeterRecord lemma24(const Params& prm, const MeterSweep&, std::uint64_t) {
  const double t_len = param(prm, "T"), r = param(prm, "R");
  // Resolve eta(tau / R) and the kernel tails: window >= 4T and >= 4T + 64/R.
  const double window = 4.0 * t_len + 64.0 / r;
  const double dt = std::min(t_len / 64.0, kPi / (8.0 * r));
  const int m = static_cast<int>(std::ceil(window / dt));
  const double t0 = -0.5 * (m * dt - t_len);
  const auto split = decompose_indicator(t_len, r, t0, dt, m);
  Measured out;
  double low_max = 0.0;
  for (int j = 0; j < m; ++j) {
    out.lhs += dt * std::abs(split.high[j]);
    low_max = std::max(low_max, std::abs(split.low[j]));
  }
  out.rhs = std::min(t_len, 1.0 / r);
  out.extras = {{"low_linf", low_max}};
  return finish(prm, out);
}

MeterRecord lemma25(const Params& prm, const MeterSweep& sw, std::uint64_t seed) {
  const double t_len = param(prm, "T"), r = param(prm, "R");
  const double l = param(prm, "l_over_r") * r;
  if (l < 16.0 * r) return excluded(prm, "needs L >= 16 R");
  const auto p = SymbolSpec::pure_power(sw.alpha);
  const Grid g(2 * kPi, 16);
  const double pmax = std::abs(p(g.wavenumber(g.n() / 2)));
  const double dt = kPi / (1.25 * (pmax + 8.0 * l + 2.0 * r));
  const int m = std::max(8, static_cast<int>(std::ceil(4.0 * t_len / dt)));
  const double t0 = -1.5 * t_len;
  const CutoffBank bank(sw.mode);
  const auto split = decompose_indicator(t_len, r, t0, dt, m);
  Rng rng(seed);
  Measured best;
  double best_ratio = -1;
  for (int t = 0; t < sw.trials; ++t) {
    auto u = random_band(g, t0, dt, m, p, rng,
                         [&](double, double sigma) { return bank.psi(l, sigma); });
    std::vector<double> v = u.values();
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < g.n(); ++i) v[static_cast<std::size_t>(j) * g.n() + i] *= split.low[j];
    }
    const SpaceTimeField cut(g, t0, dt, m, std::move(v));
    Measured meas;
    meas.lhs = project_modulation(cut, l, p, bank).field.l2();
    const auto near = apply_spacetime_multiplier(u, [&](double xi, double tau) {
      double w = 0.0;
      for (double band = l / 4; band <= 4 * l; band *= 2) w += bank.psi(band, tau - p(xi));
      return Complex(w);
    });
    meas.rhs = near.l2();
    const double ratio = meas.rhs > 0 ? meas.lhs / meas.rhs : 0.0;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = meas;
    }
  }
  return finish(prm, best);
}

MeterRecord lemma42(const Params& prm, const MeterSweep& sw, std::uint64_t seed, bool second) {
  const double nb = param(prm, "N"), b = param(prm, "B");
  const double a = sw.alpha;
  if (!second && b > std::pow(nb, a + 1)) return excluded(prm, "needs B <= N^(alpha+1)");
  if (second && b < std::pow(1 + nb, a + 1)) return excluded(prm, "needs B >= <N>^(alpha+1)");
  if (b < 1) return excluded(prm, "needs B >= 1");
  const auto p = SymbolSpec::pure_power(a);
  const Grid g(2 * kPi, pow2_at_least(8 * nb));
  const CutoffBank bank(sw.mode);
  const double pmax = std::abs(p(2.0 * nb));
  const double dt = kPi / (1.25 * (pmax + 4.0 * b));
  const double window = 32.0 * kPi / b;
  const int m = std::max(8, static_cast<int>(std::ceil(window / dt)));
  Rng rng(seed);
  Measured best;
  double best_ratio = -1;
  for (int t = 0; t < sw.trials; ++t) {
    const auto w = random_band(g, 0.0, dt, m, p, rng, [&](double xi, double sigma) {
      return bank.phi_n(xi, nb) * bank.psi(b, sigma);
    });
    const auto high = project_modulation_high(w, b, p, bank).field;
    Measured meas;
    meas.lhs = high.l2();
    const double f = sum_space(high, 0.0, 0.5, a, p);
    const double scale = second ? std::pow(b, -5.0 / 8) * std::pow(1 + nb, (1 + a) / 8)
                                : std::pow(nb, (1 + a) / 2) / b;
    meas.rhs = scale * f;
    const double ratio = meas.rhs > 0 ? meas.lhs / meas.rhs : 0.0;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = meas;
    }
  }
  return finish(prm, best);
}

MeterRecord commutator(const Params& prm, const MeterSweep& sw, std::uint64_t seed) {
  const double s = param(prm, "s"), nf = param(prm, "n_f"), ng = param(prm, "n_g");
  const Grid g(2 * kPi, pow2_at_least(3.0 * (2 * nf + 2 * ng) + 3));
  const CutoffBank bank(sw.mode);
  const auto js_dx = [s](double xi) { return Complex(0.0, xi * std::pow(bracket(xi), s)); };
  Rng rng(seed);
  Measured best;
  double best_ratio = -1;
  for (int t = 0; t < sw.trials; ++t) {
    // g sits where |f_x| peaks, which is where the commutator is largest
    const Field f = packet(g, nf, rng.uniform(0.0, 2 * kPi), rng, bank);
    const Field fx = apply_multiplier(f, [](double xi) { return Complex(0.0, xi); });
    const auto& fxv = fx.values();
    const auto peak = std::max_element(fxv.begin(), fxv.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    const Field h = packet(g, ng, g.x(static_cast<int>(peak - fxv.begin())), rng, bank);
    const Field a = apply_multiplier(dealiased_product(f, h), js_dx);
    const Field b = dealiased_product(f, apply_multiplier(h, js_dx));
    std::vector<double> c(a.values().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.values()[i] - b.values()[i];
    Measured meas;
    meas.lhs = std::sqrt(Field::from_values(g, std::move(c)).l2_squared());
    meas.rhs = sobolev(fx, s + 1) * sobolev(h, s);
    const double ratio = meas.rhs > 0 ? meas.lhs / meas.rhs : 0.0;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = meas;
    }
  }
  return finish(prm, best);
}

std::vector<Params> cartesian(const MeterSweep& sw) {
  std::vector<Params> out{{}};
  for (const auto& [name, values] : sw.axes) {
    if (values.empty()) throw ArgumentError("meter axis '" + name + "' is empty");
    std::vector<Params> next;
    for (const auto& base : out) {
      for (double v : values) {
        auto p = base;
        p.emplace_back(name, v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> axis_names(MeterKind k) {
  switch (k) {
    case MeterKind::EstPi: return {"n1", "n2", "n3", "periods"};
    case MeterKind::Lemma24: return {"T", "R"};
    case MeterKind::Lemma25: return {"T", "R", "l_over_r"};
    case MeterKind::Lemma42B1:
    case MeterKind::Lemma42B2: return {"N", "B"};
    case MeterKind::Commutator: return {"s", "n_f", "n_g"};
  }
  return {};
}

std::string describe(MeterKind k, const MeterSweep& sw) {
  std::ostringstream os;
  switch (k) {
    case MeterKind::EstPi:
      os << "f1, f2 phi_N-localized wave packets with a common centre and amplitudes U[1/2,1], f3 = P_N3 Pi(f1,f2), chi = 1";
      break;
    case MeterKind::Lemma24:
      os << "indicator of [0,T] on a window of length 4T + 64/R, dt = min(T/64, pi/(8R))";
      break;
    case MeterKind::Lemma25:
      os << "random data in the modulation band psi_L on a window of length 4T, 16 spatial points";
      break;
    case MeterKind::Lemma42B1:
    case MeterKind::Lemma42B2:
      os << "random data in phi_N(xi) psi_B(sigma), window 32 pi / B";
      break;
    case MeterKind::Commutator:
      os << "wave packet f at n_f, wave packet g at n_g centred where |f_x| peaks";
      break;
  }
  os << "; alpha=" << detail::format_double(sw.alpha) << ", trials=" << sw.trials
     << ", seed=" << sw.seed << ", cutoffs=" << (sw.mode == CutoffMode::Smooth ? "smooth" : "sharp");
  return os.str();
}

}  // namespace

std::string to_string(MeterKind k) {
  switch (k) {
    case MeterKind::EstPi: return "estPi";
    case MeterKind::Lemma24: return "lemma24";
    case MeterKind::Lemma25: return "lemma25";
    case MeterKind::Lemma42B1: return "lemma42_B1";
    case MeterKind::Lemma42B2: return "lemma42_B2";
    case MeterKind::Commutator: return "commutator";
  }
  return "?";
}

MeterKind parse_meter(const std::string& name) {
  for (auto k : {MeterKind::EstPi, MeterKind::Lemma24, MeterKind::Lemma25,
                 MeterKind::Lemma42B1, MeterKind::Lemma42B2, MeterKind::Commutator}) {
    if (to_string(k) == name) return k;
  }
  throw ArgumentError("unknown meter '" + name +
                      "' (estPi, lemma24, lemma25, lemma42_B1, lemma42_B2, commutator)");
}

MeterSweep default_sweep(MeterKind kind) {
  MeterSweep s;
  switch (kind) {
    case MeterKind::EstPi:
      s.axes = {{"n1", {1, 2, 4, 8, 16}}, {"n2", {16, 32}}, {"n3", {1, 4, 16, 32}}, {"periods", {8}}};
      break;
    case MeterKind::Lemma24:
      s.axes = {{"T", {0.1, 0.25, 0.5, 1, 2}}, {"R", {4, 8, 16, 32, 64, 128, 256, 512}}};
      break;
    case MeterKind::Lemma25:
      s.axes = {{"T", {0.25, 0.5, 1}}, {"R", {4, 8, 16}}, {"l_over_r", {16, 32, 64}}};
      s.trials = 2;
      break;
    case MeterKind::Lemma42B1:
    case MeterKind::Lemma42B2:
      s.axes = {{"N", {4, 8, 16}}, {"B", {1, 4, 16, 64, 256, 1024, 4096}}};
      s.trials = 2;
      break;
    case MeterKind::Commutator:
      s.axes = {{"s", {0, 0.5, 1, 2}}, {"n_f", {1, 2}}, {"n_g", {8, 16, 32, 64, 128}}};
      break;
  }
  return s;
}

EstimateReport run_meter(MeterKind kind, const MeterSweep& sweep) {
  const auto names = axis_names(kind);
  for (const auto& [axis, values] : sweep.axes) {
    if (std::find(names.begin(), names.end(), axis) == names.end()) {
      throw ArgumentError("meter " + to_string(kind) + " has no axis '" + axis + "'");
    }
  }
  for (const auto& n : names) {
    const bool present = std::any_of(sweep.axes.begin(), sweep.axes.end(),
                                     [&](const auto& a) { return a.first == n; });
    if (!present) throw ArgumentError("meter " + to_string(kind) + " needs axis '" + n + "'");
  }
  if (sweep.trials < 1) throw ArgumentError("meter trials must be >= 1");
  if (!(sweep.alpha > 0)) throw ArgumentError("meter alpha must be > 0");

  const auto tuples = cartesian(sweep);
  EstimateReport rep;
  rep.name = to_string(kind);
  rep.sweep = sweep;
  rep.sample_description = describe(kind, sweep);
  rep.records = detail::parallel_map<MeterRecord>(tuples.size(), [&](std::size_t i) {
    const auto seed = detail::task_seed(sweep.seed, i);
    switch (kind) {
      case MeterKind::EstPi: return est_pi(tuples[i], sweep, seed);
      case MeterKind::Lemma24: return lemma24(tuples[i], sweep, seed);
      case MeterKind::Lemma25: return lemma25(tuples[i], sweep, seed);
      case MeterKind::Lemma42B1: return lemma42(tuples[i], sweep, seed, false);
      case MeterKind::Lemma42B2: return lemma42(tuples[i], sweep, seed, true);
      case MeterKind::Commutator: return commutator(tuples[i], sweep, seed);
    }
    return MeterRecord{};
  });

  std::vector<double> ratios;
  for (const auto& r : rep.records) {
    if (r.excluded) {
      ++rep.excluded;
      continue;
    }
    if (r.counterexample) {
      ++rep.counterexamples;
      continue;
    }
    ratios.push_back(r.ratio);
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    rep.max_ratio = ratios.back();
    const std::size_t h = ratios.size() / 2;
    rep.median_ratio = ratios.size() % 2 ? ratios[h] : 0.5 * (ratios[h - 1] + ratios[h]);
  }
  rep.stable = rep.counterexamples == 0 && !ratios.empty() &&
               rep.max_ratio <= sweep.stability_factor * rep.median_ratio;
  return rep;
}

std::string to_json_lines(const EstimateReport& report) {
  std::string out;
  for (const auto& r : report.records) {
    nlohmann::ordered_json j;
    j["lemma"] = report.name;
    for (const auto& [k, v] : r.params) j[k] = v;
    if (r.excluded) {
      j["excluded"] = r.exclusion_reason;
    } else {
      j["lhs"] = r.lhs;
      j["rhs"] = r.rhs;
      if (std::isfinite(r.ratio)) {
        j["ratio"] = r.ratio;
      } else {
        j["ratio"] = nullptr;
        j["counterexample"] = true;
      }
      for (const auto& [k, v] : r.extras) j[k] = v;
    }
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace dispersolve
