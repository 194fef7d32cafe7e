#pragma once

#include <cmath>
#include <numbers>

#include "dispersolve/spectral_grid.hpp"
#include "dispersolve/symbols.hpp"

namespace testing {

using namespace dispersolve;

/// Travelling wave u(t, x) = profile(x - speed t) of u_t + L u + u u_x = 0.
struct TravellingWave {
  std::function<double(double)> profile;
  double speed;

  Field at(const Grid& g, double t) const {
    return Field::from_function(g, [&](double x) { return profile(x - speed * t); });
  }
};

/// KdV soliton 3c sech^2(sqrt(c)(x - x0)/2), speed c, for p = -xi^3.
inline TravellingWave kdv_soliton(double c, double x0) {
  return {[=](double x) {
            const double s = 1.0 / std::cosh(std::sqrt(c) * (x - x0) / 2.0);
            return 3.0 * c * s * s;
          },
          c};
}

/// Exact periodic travelling wave of u_t + H u_xx + u u_x = 0 (p = xi|xi|)
/// on a period `length`: -k sinh(g) / (sinh^2(g/2) + sin^2(k(x-x0)/2)) with
/// k = 2 pi / length, g = k / width. Speed -k coth(g). Written without the
/// cosh(g) - cos cancellation.
inline TravellingWave bo_periodic_wave(double length, double width, double x0) {
  const double k = 2.0 * std::numbers::pi / length;
  const double g = k / width;
  return {[=](double x) {
            const double a = std::sinh(g / 2.0);
            const double b = std::sin(k * (x - x0) / 2.0);
            return -k * std::sinh(g) / (a * a + b * b);
          },
          -k / std::tanh(g)};
}

/// max |L u + (u - speed) u_x| evaluated spectrally: zero for an exact
/// travelling wave up to truncation.
inline double travelling_residual(const SymbolSpec& p, const Field& u, double speed) {
  const Field lu = apply_multiplier(u, [&](double xi) { return Complex(0.0, p(xi)); });
  const Field ux = apply_multiplier(u, [](double xi) { return Complex(0.0, xi); });
  double r = 0.0;
  for (std::size_t j = 0; j < u.values().size(); ++j) {
    r = std::max(r, std::abs(lu.values()[j] + (u.values()[j] - speed) * ux.values()[j]));
  }
  return r;
}

}  // namespace testing
