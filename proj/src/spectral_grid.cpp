#include "dispersolve/spectral_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "dispersolve/errors.hpp"
#include "format.hpp"

namespace dispersolve {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(double length, int n) : length_(length), n_(n) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ArgumentError("grid length must be positive, got " +
                        detail::format_double(length));
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw ArgumentError("grid size must be a power of two >= 8, got " +
                        std::to_string(n));
  }
}

double Grid::wavenumber(int k) const {
  return 2.0 * std::numbers::pi * k / length_;
}

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are made once per shape under a lock and never freed.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

PlanPair plans_for(int m, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({m, n});
  if (it != cache.end()) return it->second;
  const int half = n / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(m) * n;
  const std::size_t cplx_size = static_cast<std::size_t>(m) * half;
  double* r = fftw_alloc_real(real_size);
  fftw_complex* c = fftw_alloc_complex(cplx_size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{};
  if (m == 1) {
    p.forward = fftw_plan_dft_r2c_1d(n, r, c, flags);
    p.backward = fftw_plan_dft_c2r_1d(n, c, r, flags | FFTW_DESTROY_INPUT);
  } else {
    p.forward = fftw_plan_dft_r2c_2d(m, n, r, c, flags);
    p.backward = fftw_plan_dft_c2r_2d(m, n, c, r, flags | FFTW_DESTROY_INPUT);
  }
  fftw_free(r);
  fftw_free(c);
  if (!p.forward || !p.backward) throw Error("FFTW planning failed");
  cache.emplace(std::pair{m, n}, p);
  return p;
}

Spectrum forward(int m, int n, std::span<const double> values) {
  const auto plans = plans_for(m, n);
  std::vector<double> in(values.begin(), values.end());
  Spectrum out(static_cast<std::size_t>(m) * (n / 2 + 1));
  fftw_execute_dft_r2c(plans.forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / (static_cast<double>(m) * n);
  for (auto& z : out) z *= scale;
  return out;
}

std::vector<double> backward(int m, int n, const Spectrum& spectrum) {
  const auto plans = plans_for(m, n);
  Spectrum in = spectrum;
  std::vector<double> out(static_cast<std::size_t>(m) * n);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return out;
}

}  // namespace

Spectrum transform(const Grid& grid, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(grid.n())) {
    throw ArgumentError("transform: expected " + std::to_string(grid.n()) +
                        " samples, got " + std::to_string(values.size()));
  }
  return forward(1, grid.n(), values);
}

std::vector<double> inverse_transform(const Grid& grid, const Spectrum& spectrum) {
  if (spectrum.size() != static_cast<std::size_t>(grid.half())) {
    throw ArgumentError("inverse_transform: expected " +
                        std::to_string(grid.half()) + " coefficients, got " +
                        std::to_string(spectrum.size()));
  }
  return backward(1, grid.n(), spectrum);
}

Spectrum transform2d(int m, int n, std::span<const double> values) {
  if (m < 1 || n < 2 || values.size() != static_cast<std::size_t>(m) * n) {
    throw ArgumentError("transform2d: shape mismatch");
  }
  return forward(m, n, values);
}

std::vector<double> inverse_transform2d(int m, int n, const Spectrum& spectrum) {
  if (m < 1 || n < 2 ||
      spectrum.size() != static_cast<std::size_t>(m) * (n / 2 + 1)) {
    throw ArgumentError("inverse_transform2d: shape mismatch");
  }
  return backward(m, n, spectrum);
}

Field Field::from_values(Grid grid, std::vector<double> values) {
  auto spectrum = transform(grid, values);
  return Field(grid, std::move(values), std::move(spectrum));
}

Field Field::from_spectrum(Grid grid, Spectrum spectrum) {
  if (spectrum.size() != static_cast<std::size_t>(grid.half())) {
    throw ArgumentError("spectrum length does not match the grid");
  }
  // The stored spectrum must be that of a real signal.
  spectrum[0] = spectrum[0].real();
  spectrum[grid.n() / 2] = spectrum[grid.n() / 2].real();
  auto values = inverse_transform(grid, spectrum);
  return Field(grid, std::move(values), std::move(spectrum));
}

Field Field::from_function(Grid grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.n());
  for (int j = 0; j < grid.n(); ++j) v[j] = f(grid.x(j));
  return from_values(grid, std::move(v));
}

Field Field::zeros(Grid grid) {
  return Field(grid, std::vector<double>(grid.n(), 0.0), Spectrum(grid.half()));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::l2_squared() const {
  double s = 0.0;
  for (int k = 0; k < grid_.half(); ++k) {
    s += pair_count(k, grid_.n()) * std::norm(spectrum_[k]);
  }
  return grid_.length() * s;
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  const Grid& g = f.grid();
  const auto& in = f.spectrum();
  Spectrum out(in.size());
  double norm2 = 0.0, leak2 = 0.0;
  for (int k = 0; k + 1 < g.half(); ++k) {
    const double xi = g.wavenumber(k);
    const Complex mp = m(xi);
    const Complex mm = k == 0 ? mp : m(-xi);
    out[k] = mp * in[k];
    // the -k coefficient the multiplier would produce, against the one a
    // real output implies
    const Complex implied = std::conj(out[k]);
    const Complex actual = mm * std::conj(in[k]);
    const double w = pair_count(k, g.n());
    norm2 += w * std::norm(out[k]);
    leak2 += (k == 0) ? std::pow(out[k].imag(), 2) : std::norm(actual - implied);
  }
  if (leak2 > 1e-20 * norm2 && leak2 > 0.0) {
    throw ContractError(
        "multiplier does not preserve real-valuedness: imaginary output "
        "fraction " + detail::format_double(std::sqrt(leak2 / norm2)));
  }
  out[0] = out[0].real();
  out[g.n() / 2] = 0.0;
  return Field::from_spectrum(g, std::move(out));
}

Field dealias(const Field& f) {
  const Grid& g = f.grid();
  Spectrum s = f.spectrum();
  for (int k = g.dealias_cutoff() + 1; k < g.half(); ++k) s[k] = 0.0;
  return Field::from_spectrum(g, std::move(s));
}

Field dealiased_product(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw ArgumentError("fields on different grids");
  const Field a = dealias(u);
  const Field b = dealias(v);
  std::vector<double> prod(a.values().size());
  for (std::size_t j = 0; j < prod.size(); ++j) {
    prod[j] = a.values()[j] * b.values()[j];
  }
  return dealias(Field::from_values(u.grid(), std::move(prod)));
}

}  // namespace dispersolve
