#pragma once

#include <span>
#include <vector>

#include "hwlab/field.hpp"

namespace hwlab {

struct ConservedTriple {
  double energy = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
};

// Fourier coefficients (FFT order) and back.
std::vector<cplx> to_spectrum(const Field& f);
std::vector<cplx> to_spectrum(const RealField& f);
Field from_spectrum(const Grid& g, std::vector<cplx> coeffs);

// D^s: multiplier |xi|^s, s in (0, 2]. Nyquist mode zeroed.
Field fractional_derivative(const Field& f, double s);
RealField fractional_derivative(const RealField& f, double s);

// d/dx: multiplier i*xi, Nyquist mode zeroed.
Field derivative(const Field& f);
RealField derivative(const RealField& f);
RealField second_derivative(const RealField& f);

// Translate by c: result(x) = f(x - c), band-limited.
Field shift(const Field& f, double c);
RealField shift(const RealField& f, double c);

// Band-limited interpolant evaluated at arbitrary points (direct sum, O(n) per point).
std::vector<cplx> interpolate(const Field& f, std::span<const double> points);
std::vector<double> interpolate(const RealField& f, std::span<const double> points);

// Trapezoid quadrature on the periodic grid.
double integrate(const RealField& f);
// Re \int f conj(g)
double inner(const Field& f, const Field& g);
double inner(const RealField& f, const RealField& g);
double l2_norm(const Field& f);
double l2_norm(const RealField& f);

// (sum (1+|xi|)^{2s} |fhat|^2 dx/n)^{1/2}. Nyquist mode included.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const RealField& f, double s);

// <Df, f>, i.e. \int |D^{1/2} f|^2.
double dirichlet_half(const Field& f);

// \int |f|^q using a 2x zero-padded grid for the pointwise power.
double integrate_abs_power(const Field& f, double q);
// |f|^{q-1} f formed on a 2x zero-padded grid, truncated back.
RealField dealiased_power(const RealField& f, double q);

ConservedTriple conserved_quantities(const Field& f, double p);

}  // namespace hwlab
