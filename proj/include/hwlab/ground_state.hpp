#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hwlab/field.hpp"

namespace hwlab {

// How the box stands in for the real line.
//   periodic:   exact solution of the periodized problem; consistent with the periodic
//               operators used by the integrator and the linearized solvers.
//   whole_line: Q = a*w + r with w(x) = 1/(1 + omega^2 x^2) handled analytically
//               (known D w, known integral) and r periodic; removes the x^-2 tail
//               wrap-around so the profile approximates the line solution.
enum class DomainModel { periodic, whole_line };

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  DomainModel model = DomainModel::periodic;
  bool dealias = false;                 // form Q^p on a 2x padded grid
  std::optional<RealField> initial;     // warm start; default 2w/(1+w^2x^2)
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroundState {
  double omega = 1.0;
  double p = 2.0;
  DomainModel model = DomainModel::periodic;
  RealField profile;
  double residual = 0.0;        // ||DQ + wQ - Q^p||_2 on the box
  double decay_exponent = 0.0;  // fitted on [L/8, L/4]
  int iterations = 0;
  double tail_amplitude = 0.0;  // a (whole_line only)
  RealField remainder;          // r (whole_line), equals profile for periodic

  GroundState() : profile(Grid(16, 1.0)), remainder(Grid(16, 1.0)) {}

  const Grid& grid() const { return profile.grid; }
  // box quadrature plus, for whole_line, the analytic tail of (a w)^2
  double mass() const;
};

GroundState solve_ground_state(double omega, double p, const Grid& g, const SolverOptions& opts = {});

// Q_w(x) = lambda^{1/(p-1)} Q(lambda x), lambda = omega / q.omega. Needs whole_line input
// unless lambda == 1. The remainder is resampled by band-limited interpolation and set to
// zero where lambda*x leaves the box.
GroundState rescale_ground_state(const GroundState& q, double omega, double tol = 1e-10);

// ||DQ + wQ - Q^p||_2 using the representation matching q.model
double elliptic_residual(const GroundState& q);
// (D + w) Q with D applied according to q.model
RealField elliptic_operator(const GroundState& q);

struct MassLaw {
  std::vector<std::pair<double, double>> samples;  // (omega, mass)
  double slope = 0.0;                              // least-squares d log M / d log omega
};

// Default options use the whole_line model.
MassLaw mass_of_omega(double p, std::span<const double> omegas, const Grid& g, std::optional<SolverOptions> opts = {});

// (Q_{w+h} - Q_{w-h}) / 2h, h defaults to 1e-3 * omega.
RealField omega_derivative_profile(double omega, double p, const Grid& g, double h = 0.0, const SolverOptions& opts = {});

struct DecayFit {
  double exponent = 0.0;
  bool matches = false;  // |exponent + 2| <= tolerance
};

// Log-log least squares of f against x over x in [lo, hi]. Throws on non-positive samples.
DecayFit fit_decay(const RealField& f, double lo, double hi, double tolerance = 0.1);
DecayFit fit_decay(const GroundState& q);

}  // namespace hwlab
