#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "dispersolve/lp_toolkit.hpp"
#include "dispersolve/random.hpp"
#include "dispersolve/spectral_grid.hpp"

namespace testing {

using namespace dispersolve;

constexpr double kPi = std::numbers::pi;

/// Random real field with spectrum supported on 1 <= |k| <= kmax (no mean,
/// no Nyquist).
inline Field random_field(const Grid& g, std::uint64_t seed, int kmax = -1) {
  Rng rng(seed);
  if (kmax < 0) kmax = g.n() / 2 - 1;
  Spectrum s(g.half());
  for (int k = 1; k <= kmax; ++k) s[k] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return Field::from_spectrum(g, s);
}

/// Random space-time field with no Nyquist content on either axis.
inline SpaceTimeField random_spacetime(const Grid& g, int m, double dt, std::uint64_t seed,
                                       bool zero_mean = true) {
  Rng rng(seed);
  const int half = g.half();
  Spectrum s(static_cast<std::size_t>(m) * half);
  for (int a = 0; a < m; ++a) {
    if (2 * a == m) continue;
    for (int k = 0; k + 1 < half; ++k) {
      if (k == 0 && zero_mean) continue;
      s[static_cast<std::size_t>(a) * half + k] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
  }
  // make the k = 0 column Hermitian in the time index
  for (int a = 1; 2 * a < m; ++a) {
    s[static_cast<std::size_t>(m - a) * half] = std::conj(s[static_cast<std::size_t>(a) * half]);
  }
  s[0] = s[0].real();
  return SpaceTimeField::from_spectrum(g, 0.0, dt, m, s);
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace testing
