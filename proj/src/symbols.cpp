#include "dispersolve/symbols.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74's pchip header calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <fstream>
#include <limits>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "format.hpp"
#include "keyvalue.hpp"

namespace dispersolve {

using detail::format_double;

class SymbolTable {
 public:
  SymbolTable(std::vector<double> xi, std::vector<double> values,
              SymbolRole role, std::string source)
      : source_(std::move(source)) {
    if (xi.size() != values.size()) {
      throw ArgumentError("symbol table: column lengths differ");
    }
    if (xi.size() < 4) {
      throw ArgumentError("symbol table: at least 4 rows are required");
    }
    for (std::size_t i = 1; i < xi.size(); ++i) {
      if (!(xi[i] > xi[i - 1])) {
        throw ArgumentError("symbol table: wavenumbers must increase strictly");
      }
    }
    lo_ = xi.front();
    hi_ = xi.back();
    parity_extended_ = lo_ >= 0.0;
    odd_ = role == SymbolRole::Dispersion;
    knots_ = xi;
    if (odd_) {
      for (std::size_t i = 0; i < xi.size(); ++i) {
        const double scale = std::max(1.0, std::abs(values[i]));
        if (xi[i] == 0.0 && std::abs(values[i]) > 1e-12 * scale) {
          throw ArgumentError("symbol table: dispersion value at 0 must be 0");
        }
      }
    }
    interp_ = std::make_unique<Interp>(std::move(xi), std::move(values));
  }

  double operator()(double xi) const {
    if (parity_extended_) {
      const double mag = std::abs(xi);
      check(mag, xi);
      const double v = (*interp_)(mag);
      return (odd_ && xi < 0.0) ? -v : v;
    }
    check(xi, xi);
    return (*interp_)(xi);
  }

  double prime(double xi) const {
    if (parity_extended_) {
      const double mag = std::abs(xi);
      check(mag, xi);
      const double d = interp_->prime(mag);
      return (!odd_ && xi < 0.0) ? -d : d;
    }
    check(xi, xi);
    return interp_->prime(xi);
  }

  bool covers_zero() const { return lo_ <= 0.0 && hi_ >= 0.0; }
  std::pair<double, double> range() const {
    return parity_extended_ ? std::pair{-hi_, hi_} : std::pair{lo_, hi_};
  }

  double spacing_near(double xi) const {
    const double x = parity_extended_ ? std::abs(xi) : xi;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    if (it == knots_.begin() || it == knots_.end()) {
      return std::numeric_limits<double>::infinity();
    }
    return *it - *(it - 1);
  }

  const std::string& source() const { return source_; }

 private:
  using Interp = boost::math::interpolators::pchip<std::vector<double>>;

  void check(double x, double original) const {
    if (x < lo_ || x > hi_ || std::isnan(x)) {
      throw OutOfRangeError("tabulated symbol '" + source_ +
                            "' queried outside its table at xi = " +
                            format_double(original));
    }
  }

  std::string source_;
  double lo_ = 0.0, hi_ = 0.0;
  bool parity_extended_ = false;
  bool odd_ = true;
  std::vector<double> knots_;
  std::unique_ptr<Interp> interp_;
};

SymbolSpec SymbolSpec::pure_power(double alpha, int sign) {
  if (!(alpha > 0.0)) throw ArgumentError("purepower: alpha must be > 0");
  if (sign != 1 && sign != -1) throw ArgumentError("purepower: sign is +-1");
  return SymbolSpec(SymbolKind::PurePower, SymbolRole::Dispersion, alpha, sign);
}

SymbolSpec SymbolSpec::kdv() {
  return SymbolSpec(SymbolKind::Kdv, SymbolRole::Dispersion, 2.0, -1);
}

SymbolSpec SymbolSpec::ilw() {
  return SymbolSpec(SymbolKind::Ilw, SymbolRole::Dispersion, 1.0, 1);
}

SymbolSpec SymbolSpec::smith() {
  return SymbolSpec(SymbolKind::Smith, SymbolRole::Dispersion, 1.0, 1);
}

SymbolSpec SymbolSpec::homogeneous(double beta) {
  if (!(beta >= 0.0)) throw ArgumentError("D^beta: beta must be >= 0");
  return SymbolSpec(SymbolKind::Homogeneous, SymbolRole::Dissipation, beta, 1);
}

SymbolSpec SymbolSpec::inhomogeneous(double beta) {
  if (!(beta >= 0.0)) throw ArgumentError("J^beta: beta must be >= 0");
  return SymbolSpec(SymbolKind::Inhomogeneous, SymbolRole::Dissipation, beta,
                    1);
}

SymbolSpec SymbolSpec::tabulated(std::vector<double> wavenumbers,
                                 std::vector<double> values, SymbolRole role,
                                 double order, std::string source) {
  if (role == SymbolRole::Dissipation) {
    for (double v : values) {
      if (v < 0.0) throw ArgumentError("dissipation table must be >= 0");
    }
  }
  SymbolSpec out(SymbolKind::Tabulated, role, order, 1);
  out.table_ = std::make_shared<SymbolTable>(
      std::move(wavenumbers), std::move(values), role, std::move(source));
  return out;
}

SymbolSpec SymbolSpec::load_table(const std::string& path, SymbolRole role,
                                  double order) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open symbol table '" + path + "'");
  std::vector<double> xi, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (detail::trim(line).empty()) continue;
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected two numbers");
    }
    xi.push_back(a);
    v.push_back(b);
  }
  return tabulated(std::move(xi), std::move(v), role, order, path);
}

SymbolSpec SymbolSpec::parse(std::string_view text, SymbolRole role) {
  const auto kv = detail::parse_key_values(text);
  std::string name = kv.name;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  const bool disp = role == SymbolRole::Dispersion;
  auto wrong_role = [&]() {
    return ArgumentError("symbol '" + kv.name + "' cannot be used as a " +
                         (disp ? "dispersion" : "dissipation") + " symbol");
  };
  if (name == "purepower") {
    if (!disp) throw wrong_role();
    kv.only("alpha", "sign");
    return pure_power(kv.number("alpha"),
                      static_cast<int>(kv.number("sign", 1.0)));
  }
  if (name == "kdv" || name == "ilw" || name == "smith") {
    if (!disp) throw wrong_role();
    kv.only();
    if (name == "kdv") return kdv();
    return name == "ilw" ? ilw() : smith();
  }
  if (name == "d" || name == "j") {
    if (disp) throw wrong_role();
    kv.only("beta");
    const double beta = kv.number("beta");
    return name == "d" ? homogeneous(beta) : inhomogeneous(beta);
  }
  if (name == "table") {
    if (disp) {
      kv.only("path", "alpha");
      return load_table(kv.text("path"), role, kv.number("alpha", 1.0));
    }
    kv.only("path", "beta");
    return load_table(kv.text("path"), role, kv.number("beta", 0.0));
  }
  throw ArgumentError("unknown symbol family '" + kv.name + "'");
}

std::string SymbolSpec::to_string() const {
  switch (kind_) {
    case SymbolKind::PurePower: {
      std::string s = "purepower:alpha=" + format_double(order_);
      if (sign_ < 0) s += ",sign=-1";
      return s;
    }
    case SymbolKind::Kdv:
      return "kdv";
    case SymbolKind::Ilw:
      return "ilw";
    case SymbolKind::Smith:
      return "smith";
    case SymbolKind::Homogeneous:
      return "D:beta=" + format_double(order_);
    case SymbolKind::Inhomogeneous:
      return "J:beta=" + format_double(order_);
    case SymbolKind::Tabulated:
      return "table:path=" + table_->source() +
             (role_ == SymbolRole::Dispersion ? ",alpha=" : ",beta=") +
             format_double(order_);
  }
  return "?";
}

int SymbolSpec::orientation() const {
  switch (kind_) {
    case SymbolKind::PurePower:
      return sign_;
    case SymbolKind::Kdv:
      return -1;
    case SymbolKind::Tabulated: {
      const double top = table_->range().second;
      return (*table_)(top) / top >= 0.0 ? 1 : -1;
    }
    default:
      return 1;
  }
}

std::optional<std::pair<double, double>> SymbolSpec::table_range() const {
  if (!table_) return std::nullopt;
  return table_->range();
}

double SymbolSpec::table_spacing_near(double xi) const {
  return table_ ? table_->spacing_near(xi) : 0.0;
}

namespace {

// p on |xi| >= 0, before the odd extension.
double dispersion_positive(SymbolKind kind, double alpha, double x) {
  switch (kind) {
    case SymbolKind::PurePower:
      if (alpha == 1.0) return x * x;
      if (alpha == 2.0) return x * x * x;
      return std::pow(x, alpha + 1.0);
    case SymbolKind::Kdv:
      return x * x * x;
    case SymbolKind::Ilw:
      if (x < 1e-4) {
        const double x2 = x * x;
        return x * (1.0 + x2 / 3.0 - x2 * x2 / 45.0);
      }
      return x * x / std::tanh(x);
    case SymbolKind::Smith:
      return x * std::sqrt(std::fma(x, x, 1.0));
    default:
      return 0.0;
  }
}

// p(a + h) - p(a) for a > 0, a + h > 0 and the closed-form families, with
// the sign factor of PurePower/KdV left to the caller.
double increment_positive(SymbolKind kind, double alpha, double a, double h) {
  const double x = a + h;
  switch (kind) {
    case SymbolKind::PurePower:
    case SymbolKind::Kdv: {
      const double p = kind == SymbolKind::Kdv ? 2.0 : alpha;
      if (p == 1.0) return h * (2.0 * a + h);
      if (p == 2.0) return h * (3.0 * a * a + 3.0 * a * h + h * h);
      return std::pow(a, p + 1.0) * std::expm1((p + 1.0) * std::log1p(h / a));
    }
    case SymbolKind::Smith: {
      const double den = x * std::sqrt(std::fma(x, x, 1.0)) +
                         a * std::sqrt(std::fma(a, a, 1.0));
      if (den == 0.0) return 0.0;
      return h * (2.0 * a + h) * (x * x + a * a + 1.0) / den;
    }
    case SymbolKind::Ilw: {
      if (a < 1e-4 || x < 1e-4) {
        return dispersion_positive(kind, alpha, x) -
               dispersion_positive(kind, alpha, a);
      }
      // coth x - coth a = 2 e^{-2a} expm1(-2h) / (expm1(-2x) expm1(-2a))
      const double dcoth = 2.0 * std::exp(-2.0 * a) * std::expm1(-2.0 * h) /
                           (std::expm1(-2.0 * x) * std::expm1(-2.0 * a));
      return h * (2.0 * a + h) / std::tanh(x) + a * a * dcoth;
    }
    default:
      return 0.0;
  }
}

}  // namespace

double SymbolSpec::operator()(double xi) const {
  if (kind_ == SymbolKind::Tabulated) return (*table_)(xi);
  if (role_ == SymbolRole::Dissipation) {
    const double m = std::abs(xi);
    if (kind_ == SymbolKind::Homogeneous) {
      if (order_ == 0.0) return 1.0;
      if (order_ == 2.0) return m * m;
      return std::pow(m, order_);
    }
    const double one = std::fma(xi, xi, 1.0);
    if (order_ == 2.0) return one;
    return std::pow(one, 0.5 * order_);
  }
  const double mag = dispersion_positive(kind_, order_, std::abs(xi));
  const double oriented = kind_ == SymbolKind::Kdv ? -mag : sign_ * mag;
  return xi < 0.0 ? -oriented : oriented;
}

double eval_dispersion(const SymbolSpec& spec, double xi) {
  if (spec.role() != SymbolRole::Dispersion) {
    throw ArgumentError("eval_dispersion: '" + spec.to_string() +
                        "' is a dissipation symbol");
  }
  return spec(xi);
}

double eval_dissipation(const SymbolSpec& spec, double xi) {
  if (spec.role() != SymbolRole::Dissipation) {
    throw ArgumentError("eval_dissipation: '" + spec.to_string() +
                        "' is a dispersion symbol");
  }
  return spec(xi);
}

double dispersion_increment(const SymbolSpec& spec, double a, double h) {
  if (spec.role() != SymbolRole::Dispersion) {
    throw ArgumentError("dispersion_increment needs a dispersion symbol");
  }
  if (spec.kind() == SymbolKind::Tabulated) return spec(a + h) - spec(a);
  if (a < 0.0) return -dispersion_increment(spec, -a, -h);
  if (a == 0.0) return spec(h);
  if (a + h < 0.0) return spec(a + h) - spec(a);
  const double inc = increment_positive(spec.kind(), spec.order(), a, h);
  const int s = spec.kind() == SymbolKind::Kdv ? -1 : spec.sign();
  return s * inc;
}

double resonance(const SymbolSpec& spec, double xi1, double xi2) {
  if (spec.role() != SymbolRole::Dispersion) {
    throw ArgumentError("resonance needs a dispersion symbol");
  }
  if (spec.kind() == SymbolKind::Tabulated) {
    return spec(xi1 + xi2) - spec(xi1) - spec(xi2);
  }
  // The three frequencies xi1, xi2, -(xi1+xi2) sum to zero; Omega is
  // symmetric in them. Drop the largest in magnitude; the other two share a
  // sign and Omega = p(x + y) - p(x) - p(y) with |y| <= |x|.
  const double xi3 = -(xi1 + xi2);
  double f[3] = {xi1, xi2, xi3};
  int big = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(f[i]) > std::abs(f[big])) big = i;
  }
  double x = f[(big + 1) % 3];
  double y = f[(big + 2) % 3];
  if (std::abs(y) > std::abs(x)) std::swap(x, y);
  if (x == 0.0) return 0.0;
  if (spec.is_pure_power()) {
    const int s = spec.kind() == SymbolKind::Kdv ? -1 : spec.sign();
    // (x+y)|x+y| - x|x| - y|y| = 2|x|y and (x+y)^3 - x^3 - y^3 = 3xy(x+y)
    if (spec.order() == 1.0) return s * 2.0 * std::abs(x) * y;
    if (spec.order() == 2.0) return s * 3.0 * x * y * (x + y);
  }
  return dispersion_increment(spec, x, y) - spec(y);
}

double dispersion_slope_at_zero(const SymbolSpec& spec) {
  switch (spec.kind()) {
    case SymbolKind::PurePower:
    case SymbolKind::Kdv:
      return 0.0;
    case SymbolKind::Ilw:
    case SymbolKind::Smith:
      return 1.0;
    case SymbolKind::Tabulated: {
      const auto range = spec.table_range();
      if (!range || range->first > 0.0 || range->second <= 0.0) {
        throw PreconditionError("tabulated symbol '" + spec.to_string() +
                                "' is undefined near 0");
      }
      // one-sided slope of the interpolant on [0, h]
      const double h = std::min(1e-6, 0.5 * range->second);
      return std::abs(spec(h) / h);
    }
    default:
      throw ArgumentError("slope at zero needs a dispersion symbol");
  }
}

namespace {

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out;
  if (n <= 1 || a == b) {
    out.push_back(a);
    return out;
  }
  out.reserve(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      out.push_back(a);
    } else if (i == n - 1) {
      out.push_back(b);
    } else {
      out.push_back(std::exp(la + (lb - la) * i / (n - 1)));
    }
  }
  return out;
}

std::string describe(const CertificateRegion& r) {
  std::ostringstream os;
  os << "shape="
     << (r.shape == RegionShape::FirstLarge ? "first-large" : "both-large")
     << " floor=" << format_double(r.xi_floor) << " |xi1|=["
     << format_double(r.xi1_min) << "," << format_double(r.xi1_max)
     << "] |xi2|=[" << format_double(r.xi2_min) << ","
     << format_double(r.xi2_max) << "] lambda=["
     << format_double(r.lambda_min) << "," << format_double(r.lambda_max)
     << "] samples_per_axis=" << r.samples_per_axis
     << " quadrants=" << (r.positive_quadrant ? "positive" : "all")
     << " eps_cert=" << format_double(r.eps_cert);
  return os.str();
}

}  // namespace

HypothesisCertificate certify_hypothesis1(const SymbolSpec& spec, double alpha,
                                          const CertificateRegion& region) {
  if (spec.role() != SymbolRole::Dispersion) {
    throw ArgumentError("certify_hypothesis1 needs a dispersion symbol");
  }
  const auto& r = region;
  if (r.samples_per_axis < 1) throw ArgumentError("empty sample region");
  if (!(r.xi1_min > 0.0 && r.xi1_min <= r.xi1_max && r.xi2_min > 0.0 &&
        r.xi2_min <= r.xi2_max)) {
    throw ArgumentError("empty sample region: bad wavenumber ranges");
  }
  if (!(r.lambda_min > 0.0 && r.lambda_min <= r.lambda_max &&
        r.lambda_max <= 1.0)) {
    throw ArgumentError("lambda range must lie in (0, 1]");
  }
  if (r.xi1_min < r.xi_floor ||
      (r.shape == RegionShape::BothLarge && r.xi2_min < r.xi_floor)) {
    throw ArgumentError("sampled region extends below the floor |xi| >= " +
                        format_double(r.xi_floor));
  }

  const auto lambdas = logspace(r.lambda_min, r.lambda_max, r.samples_per_axis);
  const auto m1 = logspace(r.xi1_min, r.xi1_max, r.samples_per_axis);
  const auto m2 = logspace(r.xi2_min, r.xi2_max, r.samples_per_axis);

  HypothesisCertificate cert;
  cert.family = spec.to_string();
  cert.region_description = describe(r);
  cert.ratio_min = std::numeric_limits<double>::infinity();
  cert.ratio_max = -std::numeric_limits<double>::infinity();

  const int sign_pairs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  const int n_signs = r.positive_quadrant ? 1 : 4;

  auto visit = [&](double lambda, double a, double b) {
    for (int s = 0; s < n_signs; ++s) {
      const double xi1 = sign_pairs[s][0] * a;
      const double xi2 = sign_pairs[s][1] * b;
      const double xi3 = xi1 + xi2;
      const double mn = std::min({std::abs(xi1), std::abs(xi2), std::abs(xi3)});
      const double mx = std::max({std::abs(xi1), std::abs(xi2), std::abs(xi3)});
      if (mn == 0.0) {
        ++cert.excluded;
        continue;
      }
      const double omega = resonance(spec, xi1 / lambda, xi2 / lambda);
      const double ratio = std::pow(lambda, alpha + 1.0) * std::abs(omega) /
                           (mn * std::pow(mx, alpha));
      ++cert.samples;
      if (ratio < cert.ratio_min) {
        cert.ratio_min = ratio;
        cert.argmin = {lambda, xi1, xi2, ratio};
      }
      if (ratio > cert.ratio_max) {
        cert.ratio_max = ratio;
        cert.argmax = {lambda, xi1, xi2, ratio};
      }
    }
  };

  for (double lambda : lambdas) {
    for (double a : m1) {
      for (double b : m2) visit(lambda, a, b);
      if (a >= r.xi2_min && a <= r.xi2_max) visit(lambda, a, a);
    }
  }
  if (cert.samples == 0) {
    throw ArgumentError("empty sample region: every point was excluded");
  }
  cert.certified = cert.ratio_min >= r.eps_cert;
  return cert;
}

namespace {

struct Derivatives {
  double first;
  double second;
};

Derivatives closed_form_derivatives(const SymbolSpec& spec, double xi) {
  const double x = std::abs(xi);
  const double sx = xi < 0.0 ? -1.0 : 1.0;
  switch (spec.kind()) {
    case SymbolKind::PurePower:
    case SymbolKind::Kdv: {
      const double a = spec.order();
      const double s = spec.kind() == SymbolKind::Kdv ? -1.0 : spec.sign();
      return {s * (a + 1.0) * std::pow(x, a),
              s * sx * (a + 1.0) * a * std::pow(x, a - 1.0)};
    }
    case SymbolKind::Smith: {
      const double r = std::sqrt(x * x + 1.0);
      return {(2.0 * x * x + 1.0) / r,
              sx * x * (2.0 * x * x + 3.0) / (r * r * r)};
    }
    case SymbolKind::Ilw: {
      const double c = 1.0 / std::tanh(x);
      const double sh = std::sinh(x);
      const double csch2 = std::isinf(sh) ? 0.0 : 1.0 / (sh * sh);
      const double first = 2.0 * x * c - x * x * csch2;
      const double second = 2.0 * c - 4.0 * x * csch2 + 2.0 * x * x * c * csch2;
      return {first, sx * second};
    }
    default:
      throw ArgumentError("no closed-form derivatives for '" +
                          spec.to_string() + "'");
  }
}

Derivatives finite_difference_derivatives(const SymbolSpec& spec, double xi) {
  const double h = 1e-4 * std::abs(xi);
  const double pp = spec(xi + h), p0 = spec(xi), pm = spec(xi - h);
  return {(pp - pm) / (2.0 * h), (pp - 2.0 * p0 + pm) / (h * h)};
}

}  // namespace

DerivativeCertificate check_lemma21(const SymbolSpec& spec, double alpha,
                                    double xi_min, double xi_max, int samples,
                                    DerivativeMethod method, double xi_floor,
                                    double eps_cert) {
  if (spec.role() != SymbolRole::Dispersion) {
    throw ArgumentError("check_lemma21 needs a dispersion symbol");
  }
  if (samples < 1 || !(xi_min > 0.0) || xi_min > xi_max) {
    throw ArgumentError("empty sample region");
  }
  if (xi_min < xi_floor) {
    throw ArgumentError("derivative check range extends below the floor " +
                        format_double(xi_floor));
  }
  const bool tabulated = spec.kind() == SymbolKind::Tabulated;
  if (method == DerivativeMethod::Auto) {
    method = tabulated ? DerivativeMethod::FiniteDifference
                       : DerivativeMethod::ClosedForm;
  }
  DerivativeCertificate out;
  out.family = spec.to_string();
  out.xi_min = xi_min;
  out.xi_max = xi_max;
  out.samples = samples;
  out.method = method;
  out.first_min = out.second_min = std::numeric_limits<double>::infinity();
  out.first_max = out.second_max = -std::numeric_limits<double>::infinity();
  for (double xi : logspace(xi_min, xi_max, samples)) {
    if (tabulated && spec.table_spacing_near(xi) > 0.25 * xi) {
      throw ResolutionError(
          "table '" + spec.to_string() +
          "' is too coarse for second differences near xi = " +
          format_double(xi));
    }
    double r1 = 0.0, r2 = 0.0;
    if (method == DerivativeMethod::ClosedForm && spec.is_pure_power()) {
      // |p'| / xi^alpha = (a+1) xi^{a-alpha}, |p''| / xi^{alpha-1} = (a+1) a xi^{a-alpha}
      const double a = spec.order();
      const double scale = a == alpha ? 1.0 : std::pow(xi, a - alpha);
      r1 = (a + 1.0) * scale;
      r2 = (a + 1.0) * a * scale;
    } else {
      const auto d = method == DerivativeMethod::ClosedForm
                         ? closed_form_derivatives(spec, xi)
                         : finite_difference_derivatives(spec, xi);
      r1 = std::abs(d.first) / std::pow(xi, alpha);
      r2 = std::abs(d.second) / std::pow(xi, alpha - 1.0);
    }
    out.first_min = std::min(out.first_min, r1);
    out.first_max = std::max(out.first_max, r1);
    out.second_min = std::min(out.second_min, r2);
    out.second_max = std::max(out.second_max, r2);
  }
  out.certified = out.first_min >= eps_cert && out.second_min >= eps_cert;
  return out;
}

}  // namespace dispersolve
