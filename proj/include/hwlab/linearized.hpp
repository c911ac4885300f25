#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hwlab/field.hpp"
#include "hwlab/ground_state.hpp"

namespace hwlab {

enum class Branch { plus, minus };
enum class NormKind { l2, h_half };

// L+ = D + w - p Q^{p-1},  L- = D + w - Q^{p-1}, with the periodic D.
class LinearizedOperator {
 public:
  LinearizedOperator(Branch which, const GroundState& q);

  Branch which() const { return which_; }
  double omega() const { return omega_; }
  double p() const { return p_; }
  const RealField& potential() const { return potential_; }

  RealField apply(const RealField& v) const;
  Eigen::MatrixXd matrix() const;

 private:
  Branch which_;
  double omega_;
  double p_;
  RealField potential_;
};

RealField apply_linearized(Branch which, const GroundState& q, const RealField& v);

struct ConstraintSet {
  std::vector<RealField> vectors;
};

// Dense circulant matrix of a real even Fourier symbol on the grid.
Eigen::MatrixXd circulant_matrix(const Grid& g, bool include_nyquist, double (*symbol)(double));
Eigen::MatrixXd derivative_matrix(const Grid& g);  // D, Nyquist zeroed
Eigen::MatrixXd gram_matrix(const Grid& g, NormKind norm);  // per-sample Gram (dx factored out)

// Minimal Rayleigh quotient <A v, v> / ||v||^2 over v orthogonal (L2) to the constraints.
// Throws std::runtime_error when the constraints are numerically dependent.
double constrained_min_eigenvalue(const Eigen::MatrixXd& op, const Grid& g, const ConstraintSet& c, NormKind norm);
double constrained_min_eigenvalue(Branch which, const GroundState& q, const ConstraintSet& c, NormKind norm);

// L2-orthogonal projection onto the complement of span(constraints).
RealField project_out(const RealField& v, const ConstraintSet& c);

// floor > 0: |R|^{p-3}(Re conj(R) e)^2 evaluated as |R|^{p-1} (Re(conj(R) e)/max(|R|, floor))^2.
// floor == 0: the literal power; throws std::overflow_error if it is not finite.
double quadratic_form_h0(const Field& eps, const Field& r0, double omega_ref, double p, double floor = 1e-14);

struct WaveTerm {
  Field profile;  // R_k
  double omega0;  // omega_k(0)
};

double quadratic_form_hk(const Field& eps, std::span<const WaveTerm> waves, std::span<const RealField> cutoffs, double p,
                         double floor = 1e-14);

// phi_R(x - center): 1 for |y| <= R, (|y|/R)^{-a} for |y| >= 2R, quintic Hermite blend
// (value, first and second derivative matched) in between.
RealField localized_weight(const Grid& g, double R, double a, double center);
double localized_weight_value(double y, double R, double a);

}  // namespace hwlab
