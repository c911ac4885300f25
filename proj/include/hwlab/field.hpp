#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hwlab/grid.hpp"

namespace hwlab {

using cplx = std::complex<double>;

// Samples of a function on a grid. Value type: the field owns its samples.
template <class T>
struct BasicField {
  Grid grid;
  std::vector<T> values;

  explicit BasicField(const Grid& g) : grid(g), values(g.size(), T{}) {}
  BasicField(const Grid& g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
  }

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t j) { return values[j]; }
  const T& operator[](std::size_t j) const { return values[j]; }
};

using Field = BasicField<cplx>;
using RealField = BasicField<double>;

template <class F>
RealField sample(const Grid& g, F&& f) {
  RealField out(g);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(g.point(j));
  return out;
}

template <class F>
Field sample_complex(const Grid& g, F&& f) {
  Field out(g);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(g.point(j));
  return out;
}

Field to_complex(const RealField& f);
RealField real_part(const Field& f);
RealField imag_part(const Field& f);

bool all_finite(const Field& f);
bool all_finite(const RealField& f);
double max_abs(const Field& f);
double max_abs(const RealField& f);

// Pointwise arithmetic. Grids must match.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx c, const Field& a);
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double c, const RealField& a);
RealField operator*(const RealField& a, const RealField& b);

}  // namespace hwlab
