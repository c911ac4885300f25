#include "hwlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hwlab/fft.hpp"

namespace hwlab {

namespace {

template <class Symbol>
Field apply_symbol(const Field& f, Symbol&& symbol) {
  auto c = to_spectrum(f);
  const Grid& g = f.grid;
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= symbol(g.wavenumber(m), m == g.nyquist_index());
  return from_spectrum(g, std::move(c));
}

// Coefficients on a 2n grid carrying the same band-limited function.
std::vector<cplx> pad_twice(const std::vector<cplx>& c) {
  const std::size_t n = c.size(), h = n / 2;
  std::vector<cplx> out(2 * n, 0.0);
  for (std::size_t m = 0; m < h; ++m) out[m] = 2.0 * c[m];
  for (std::size_t m = h + 1; m < n; ++m) out[n + m] = 2.0 * c[m];
  // split the unmatched mode so real input stays real
  out[h] = c[h];
  out[n + h] = c[h];
  return out;
}

std::vector<cplx> truncate_half(const std::vector<cplx>& fine) {
  const std::size_t n = fine.size() / 2, h = n / 2;
  std::vector<cplx> out(n);
  for (std::size_t m = 0; m < h; ++m) out[m] = 0.5 * fine[m];
  for (std::size_t m = h + 1; m < n; ++m) out[m] = 0.5 * fine[n + m];
  out[h] = 0.5 * (fine[h] + fine[n + h]);
  return out;
}

std::vector<cplx> fine_samples(const Field& f) {
  auto c = pad_twice(to_spectrum(f));
  fft::inverse(c);
  return c;
}

}  // namespace

std::vector<cplx> to_spectrum(const Field& f) {
  auto c = f.values;
  fft::forward(c);
  return c;
}

std::vector<cplx> to_spectrum(const RealField& f) { return to_spectrum(to_complex(f)); }

Field from_spectrum(const Grid& g, std::vector<cplx> coeffs) {
  if (coeffs.size() != g.size()) throw std::invalid_argument("spectrum size does not match grid");
  fft::inverse(coeffs);
  return Field(g, std::move(coeffs));
}

Field fractional_derivative(const Field& f, double s) {
  if (!(s > 0.0) || s > 2.0) throw std::invalid_argument("fractional order must lie in (0, 2]");
  return apply_symbol(f, [s](double xi, bool nyq) { return nyq ? 0.0 : std::pow(std::abs(xi), s); });
}

RealField fractional_derivative(const RealField& f, double s) {
  return real_part(fractional_derivative(to_complex(f), s));
}

Field derivative(const Field& f) {
  return apply_symbol(f, [](double xi, bool nyq) { return nyq ? cplx(0.0) : cplx(0.0, xi); });
}

RealField derivative(const RealField& f) { return real_part(derivative(to_complex(f))); }

RealField second_derivative(const RealField& f) {
  return real_part(apply_symbol(to_complex(f), [](double xi, bool nyq) { return nyq ? 0.0 : -xi * xi; }));
}

Field shift(const Field& f, double c) {
  return apply_symbol(f, [c](double xi, bool nyq) { return nyq ? cplx(std::cos(xi * c)) : std::polar(1.0, -xi * c); });
}

RealField shift(const RealField& f, double c) { return real_part(shift(to_complex(f), c)); }

std::vector<cplx> interpolate(const Field& f, std::span<const double> points) {
  const Grid& g = f.grid;
  const auto c = to_spectrum(f);
  const std::size_t n = g.size(), h = n / 2;
  const double x0 = g.point(0);
  const double k = 2.0 * std::numbers::pi / g.length();
  std::vector<cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double y = points[i] - x0;
    const cplx step = std::polar(1.0, k * y);
    cplx ph = 1.0;
    cplx acc = c[0];
    // e^{i m k y} by recurrence, renormalized every 64 steps
    for (std::size_t m = 1; m < h; ++m) {
      ph *= step;
      if (m % 64 == 0) ph = std::polar(1.0, static_cast<double>(m) * k * y);
      acc += c[m] * ph + c[n - m] * std::conj(ph);
    }
    acc += c[h] * std::cos(static_cast<double>(h) * k * y);
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<double> interpolate(const RealField& f, std::span<const double> points) {
  auto z = interpolate(to_complex(f), points);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

double integrate(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.dx();
}

double inner(const Field& f, const Field& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("fields live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += (f[j] * std::conj(g[j])).real();
  return s * f.grid.dx();
}

double inner(const RealField& f, const RealField& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("fields live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * f.grid.dx();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

double sobolev_norm(const Field& f, double s) {
  if (s < 0.0) throw std::invalid_argument("Sobolev order must be nonnegative");
  const auto c = to_spectrum(f);
  double acc = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m)
    acc += std::pow(1.0 + std::abs(f.grid.wavenumber(m)), 2.0 * s) * std::norm(c[m]);
  return std::sqrt(acc * f.grid.dx() / static_cast<double>(f.size()));
}

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(to_complex(f), s); }

double dirichlet_half(const Field& f) {
  const auto c = to_spectrum(f);
  double acc = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m)
    if (m != f.grid.nyquist_index()) acc += std::abs(f.grid.wavenumber(m)) * std::norm(c[m]);
  return acc * f.grid.dx() / static_cast<double>(f.size());
}

double integrate_abs_power(const Field& f, double q) {
  const auto fine = fine_samples(f);
  double acc = 0.0;
  for (const auto& v : fine) acc += std::pow(std::abs(v), q);
  return acc * 0.5 * f.grid.dx();
}

RealField dealiased_power(const RealField& f, double q) {
  auto fine = fine_samples(to_complex(f));
  for (auto& v : fine) {
    const double r = v.real();
    v = std::pow(std::abs(r), q - 1.0) * r;
  }
  fft::forward(fine);
  return real_part(from_spectrum(f.grid, truncate_half(fine)));
}

ConservedTriple conserved_quantities(const Field& f, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("nonlinearity exponent must exceed 1");
  const auto c = to_spectrum(f);
  const Grid& g = f.grid;
  const double w = g.dx() / static_cast<double>(g.size());
  double kinetic = 0.0, momentum = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m == g.nyquist_index()) continue;
    const double xi = g.wavenumber(m);
    kinetic += std::abs(xi) * std::norm(c[m]);
    momentum -= xi * std::norm(c[m]);
  }
  ConservedTriple out;
  out.mass = inner(f, f);
  out.energy = 0.5 * kinetic * w - integrate_abs_power(f, p + 1.0) / (p + 1.0);
  out.momentum = momentum * w;
  return out;
}

}  // namespace hwlab
