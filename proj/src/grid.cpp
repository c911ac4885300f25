#include "hwlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hwlab/field.hpp"

namespace hwlab {

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 4, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid length must be positive");
}

double Grid::wavenumber(std::size_t m) const {
  const double k = 2.0 * std::numbers::pi / length_;
  const auto mi = static_cast<long long>(m);
  const auto ni = static_cast<long long>(n_);
  return k * static_cast<double>(mi < ni / 2 ? mi : mi - ni);
}

double Grid::max_wavenumber() const { return std::numbers::pi / dx(); }

std::vector<double> Grid::points() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> xi(n_);
  for (std::size_t m = 0; m < n_; ++m) xi[m] = wavenumber(m);
  return xi;
}

Grid make_grid(std::size_t n, double length) { return Grid(n, length); }

Field to_complex(const RealField& f) {
  Field out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j];
  return out;
}

RealField real_part(const Field& f) {
  RealField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
  return out;
}

RealField imag_part(const Field& f) {
  RealField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].imag();
  return out;
}

bool all_finite(const Field& f) {
  for (const auto& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool all_finite(const RealField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

namespace {
template <class T>
void check_same(const BasicField<T>& a, const BasicField<T>& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  check_same(a, b);
  Field out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  check_same(a, b);
  Field out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

Field operator*(cplx c, const Field& a) {
  Field out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = c * a[j];
  return out;
}

RealField operator+(const RealField& a, const RealField& b) {
  check_same(a, b);
  RealField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

RealField operator-(const RealField& a, const RealField& b) {
  check_same(a, b);
  RealField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

RealField operator*(double c, const RealField& a) {
  RealField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = c * a[j];
  return out;
}

RealField operator*(const RealField& a, const RealField& b) {
  check_same(a, b);
  RealField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace hwlab
