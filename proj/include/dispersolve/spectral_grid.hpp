#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dispersolve {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Uniform periodic grid on [0, length) with n points, n a power of two >= 8.
class Grid {
 public:
  Grid(double length, int n);

  double length() const { return length_; }
  int n() const { return n_; }
  int half() const { return n_ / 2 + 1; }
  double dx() const { return length_ / n_; }
  double x(int j) const { return j * dx(); }
  /// 2 pi k / length for the half-spectrum index k in [0, n/2].
  double wavenumber(int k) const;
  /// Largest retained index under the 2/3 rule.
  int dealias_cutoff() const { return n_ / 3; }

  bool operator==(const Grid& other) const {
    return length_ == other.length_ && n_ == other.n_;
  }

 private:
  double length_;
  int n_;
};

bool is_power_of_two(long long n);

/// u_hat(k) = (1/n) sum_j u(x_j) exp(-i xi_k x_j), k = 0..n/2.
Spectrum transform(const Grid& grid, std::span<const double> values);
std::vector<double> inverse_transform(const Grid& grid, const Spectrum& spectrum);

/// 2-D transform of an m x n row-major array (rows are time samples),
/// normalized by 1/(m n); the result is m x (n/2+1), complex along time.
Spectrum transform2d(int m, int n, std::span<const double> values);
std::vector<double> inverse_transform2d(int m, int n, const Spectrum& spectrum);

/// Real periodic snapshot, kept together with its half-spectrum.
class Field {
 public:
  static Field from_values(Grid grid, std::vector<double> values);
  static Field from_spectrum(Grid grid, Spectrum spectrum);
  static Field from_function(Grid grid, const std::function<double(double)>& f);
  static Field zeros(Grid grid);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const Spectrum& spectrum() const { return spectrum_; }
  double mean() const { return spectrum_[0].real(); }
  double max_abs() const;
  /// length * sum |u_hat|^2 with conjugate pairs counted twice (= int u^2).
  double l2_squared() const;

 private:
  Field(Grid grid, std::vector<double> values, Spectrum spectrum)
      : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

  Grid grid_;
  std::vector<double> values_;
  Spectrum spectrum_;
};

/// Weight that counts a half-spectrum entry once for k = 0 and k = n/2 and
/// twice otherwise.
inline double pair_count(int k, int n) { return (k == 0 || 2 * k == n) ? 1.0 : 2.0; }

using Multiplier = std::function<Complex(double)>;

/// Multiplies the spectrum by m(xi_k). The multiplier must satisfy
/// m(-xi) = conj(m(xi)); a violation large enough to give the output an
/// imaginary part above 1e-10 of its norm raises ContractError. The Nyquist
/// mode of the result is zero.
Field apply_multiplier(const Field& f, const Multiplier& m);

/// Zeroes every mode with |k| > n/3.
Field dealias(const Field& f);

/// Dealiased pseudo-spectral product u*v truncated to |k| <= n/3.
Field dealiased_product(const Field& u, const Field& v);

// Field snapshot files: "n length time" then n samples (text), or the same
// data as little-endian float64 when the path ends in ".bin".
struct Snapshot {
  Field field;
  double time;
};
void write_field(const std::string& path, const Field& f, double time);
Snapshot read_field(const std::string& path);

}  // namespace dispersolve
