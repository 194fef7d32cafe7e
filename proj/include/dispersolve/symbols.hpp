#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dispersolve {

enum class SymbolRole { Dispersion, Dissipation };

enum class SymbolKind {
  PurePower,     // xi |xi|^alpha, optionally negated
  Kdv,           // -xi^3
  Ilw,           // xi^2 coth(xi)
  Smith,         // xi sqrt(xi^2 + 1)
  Homogeneous,   // |xi|^beta        (D^beta)
  Inhomogeneous, // (1+xi^2)^(beta/2) (J^beta)
  Tabulated,
};

class SymbolTable;

/// A real Fourier symbol: either a dispersion symbol p (odd, the equation
/// carries the multiplier i p) or a dissipation symbol q (even, >= 0).
class SymbolSpec {
 public:
  static SymbolSpec pure_power(double alpha, int sign = 1);
  static SymbolSpec kdv();
  static SymbolSpec ilw();
  static SymbolSpec smith();
  static SymbolSpec homogeneous(double beta);
  static SymbolSpec inhomogeneous(double beta);
  /// Monotone cubic (PCHIP) interpolation of the samples, no extrapolation.
  /// When every wavenumber is >= 0 the table is extended to negative
  /// wavenumbers by oddness (dispersion) or evenness (dissipation).
  static SymbolSpec tabulated(std::vector<double> wavenumbers,
                              std::vector<double> values, SymbolRole role,
                              double order, std::string source = "inline");
  /// Two-column text file "wavenumber value" ('#' starts a comment).
  static SymbolSpec load_table(const std::string& path, SymbolRole role,
                               double order);

  /// Config text: "purepower:alpha=1.5[,sign=-1]", "kdv", "ilw", "smith",
  /// "D:beta=2", "J:beta=1", "table:path=f.txt[,alpha=1]" (dispersion) or
  /// "table:path=f.txt,beta=2" (dissipation), "none" is rejected here.
  static SymbolSpec parse(std::string_view text, SymbolRole role);
  std::string to_string() const;

  SymbolKind kind() const { return kind_; }
  SymbolRole role() const { return role_; }
  /// alpha for dispersion symbols, beta for dissipation symbols.
  double order() const { return order_; }
  int sign() const { return sign_; }
  /// True for symbols with exact scaling lambda^{a+1} p(xi/lambda) = p(xi).
  bool is_pure_power() const {
    return kind_ == SymbolKind::PurePower || kind_ == SymbolKind::Kdv;
  }
  /// Sign of p(xi)/xi away from 0 (+1 for the dD^alpha family, -1 for KdV).
  int orientation() const;
  /// Table wavenumber range (empty for closed forms).
  std::optional<std::pair<double, double>> table_range() const;
  /// Smallest knot spacing of the table around |xi| (tabulated only).
  double table_spacing_near(double xi) const;

  double operator()(double xi) const;

 private:
  SymbolSpec(SymbolKind kind, SymbolRole role, double order, int sign)
      : kind_(kind), role_(role), order_(order), sign_(sign) {}

  SymbolKind kind_;
  SymbolRole role_;
  double order_;
  int sign_ = 1;
  std::shared_ptr<const SymbolTable> table_;
};

double eval_dispersion(const SymbolSpec& spec, double xi);
double eval_dissipation(const SymbolSpec& spec, double xi);

/// p(a + h) - p(a) without cancellation, for a and a + h of the same sign.
double dispersion_increment(const SymbolSpec& spec, double a, double h);

/// Omega(xi1, xi2) = p(xi1 + xi2) - p(xi1) - p(xi2).
///
/// Evaluated through the symmetric form over the three frequencies
/// (xi1, xi2, -xi1-xi2): the two smaller ones share a sign, and the sum is
/// assembled from a cancellation-free increment of p.
double resonance(const SymbolSpec& spec, double xi1, double xi2);

/// lim_{xi -> 0} |p(xi)/xi|, the zero-mode weight of Lambda^{alpha/2}.
double dispersion_slope_at_zero(const SymbolSpec& spec);

enum class RegionShape {
  FirstLarge,  // |xi1| >= floor
  BothLarge,   // min(|xi1|, |xi2|) >= floor
};

struct CertificateRegion {
  double xi1_min = 8.0;
  double xi1_max = 1024.0;
  double xi2_min = 8.0;
  double xi2_max = 1024.0;
  double lambda_min = 1.0 / 64.0;
  double lambda_max = 1.0;
  int samples_per_axis = 32;
  RegionShape shape = RegionShape::FirstLarge;
  bool positive_quadrant = false;
  double xi_floor = 8.0;
  double eps_cert = 1e-3;
};

struct WitnessPoint {
  double lambda = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double ratio = 0.0;
};

/// Sampled two-sided bounds for a ratio that the theory claims is ~ 1.
struct HypothesisCertificate {
  std::string family;
  std::string region_description;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::size_t samples = 0;
  std::size_t excluded = 0;
  bool certified = false;
  WitnessPoint argmin;
  WitnessPoint argmax;
};

/// lambda^{a+1} |Omega(xi1/lambda, xi2/lambda)| / (|xi|_min |xi|_max^a) over a
/// log-spaced (lambda, |xi1|, |xi2|) grid plus the diagonal |xi2| = |xi1|.
/// Points with |xi|_min = 0 are excluded, not counted as refutations.
HypothesisCertificate certify_hypothesis1(const SymbolSpec& spec, double alpha,
                                          const CertificateRegion& region);

enum class DerivativeMethod { Auto, ClosedForm, FiniteDifference };

struct DerivativeCertificate {
  std::string family;
  double xi_min = 0.0;
  double xi_max = 0.0;
  int samples = 0;
  double first_min = 0.0, first_max = 0.0;    // |p'| / |xi|^a
  double second_min = 0.0, second_max = 0.0;  // |p''| / |xi|^{a-1}
  bool certified = false;
  DerivativeMethod method = DerivativeMethod::Auto;
};

DerivativeCertificate check_lemma21(
    const SymbolSpec& spec, double alpha, double xi_min, double xi_max,
    int samples, DerivativeMethod method = DerivativeMethod::Auto,
    double xi_floor = 8.0, double eps_cert = 1e-3);

}  // namespace dispersolve
