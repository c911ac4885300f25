#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hwlab/field.hpp"

namespace hwlab {

// C(s) = ( \int_R (1 - cos z) / |z|^{1+2s} dz )^{-1}, by numerical quadrature. s in (0, 1).
double normalization_constant(double s);

struct InsufficientDecay : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegralOptions {
  // edge samples must stay below this fraction of max|f|
  double edge_threshold = 1e-8;
};

// (-Delta)^s f from the second-difference integral, treating f - f(-L/2) as zero outside
// the box (whole-line semantics; the edge level is a constant and drops out). s = 1/2 gives D.
// Throws InsufficientDecay when f - f(-L/2) is not small at both edges.
// Quadrature: y in [0, dx] from the Taylor term f''(x) y^2 (f'' by central difference),
// trapezoid on y = dx, 2dx, ..., L, then the exact tail -2 f(x) L^{-2s} / (2s).
RealField fractional_derivative_integral(const RealField& f, double s, const IntegralOptions& opts = {});

struct CommutatorDefect {
  double numerator = 0.0;        // ||D(fg) - f Dg||_2
  double derivative_sup = 0.0;   // ||f'||_inf
  double g_norm = 0.0;           // ||g||_2
  std::optional<double> ratio;   // empty when f is constant or g vanishes
};

CommutatorDefect commutator_defect(const RealField& f, const Field& g);

struct CommutatorCorpus {
  std::uint64_t seed = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

// Random band-limited pairs: f real with modes |m| <= 8, g complex with |m| <= 16,
// Gaussian coefficients scaled by 1/(1+|m|), Gaussian envelope of width L/8.
CommutatorCorpus commutator_corpus(const Grid& g, std::size_t count, std::uint64_t seed);

}  // namespace hwlab
