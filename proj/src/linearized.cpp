#include "hwlab/linearized.hpp"

#include <cmath>
#include <stdexcept>

#include "hwlab/spectral.hpp"

namespace hwlab {

LinearizedOperator::LinearizedOperator(Branch which, const GroundState& q)
    : which_(which), omega_(q.omega), p_(q.p), potential_(q.grid()) {
  const double c = which == Branch::plus ? q.p : 1.0;
  for (std::size_t j = 0; j < q.profile.size(); ++j)
    potential_[j] = -c * std::pow(std::abs(q.profile[j]), q.p - 1.0);
}

RealField LinearizedOperator::apply(const RealField& v) const {
  RealField out = fractional_derivative(v, 1.0);
  for (std::size_t j = 0; j < v.size(); ++j) out[j] += (omega_ + potential_[j]) * v[j];
  return out;
}

Eigen::MatrixXd LinearizedOperator::matrix() const {
  Eigen::MatrixXd a = derivative_matrix(potential_.grid);
  for (std::size_t j = 0; j < potential_.size(); ++j) a(j, j) += omega_ + potential_[j];
  return a;
}

RealField apply_linearized(Branch which, const GroundState& q, const RealField& v) {
  return LinearizedOperator(which, q).apply(v);
}

Eigen::MatrixXd circulant_matrix(const Grid& g, bool include_nyquist, double (*symbol)(double)) {
  const std::size_t n = g.size();
  std::vector<cplx> c(n);
  for (std::size_t m = 0; m < n; ++m)
    c[m] = (m == g.nyquist_index() && !include_nyquist) ? 0.0 : symbol(g.wavenumber(m));
  const Field kernel = from_spectrum(g, std::move(c));
  Eigen::MatrixXd a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) a(j, k) = kernel[(j + n - k) % n].real();
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd derivative_matrix(const Grid& g) {
  return circulant_matrix(g, false, [](double xi) { return std::abs(xi); });
}

Eigen::MatrixXd gram_matrix(const Grid& g, NormKind norm) {
  if (norm == NormKind::l2) return Eigen::MatrixXd::Identity(g.size(), g.size());
  return circulant_matrix(g, true, [](double xi) { return 1.0 + std::abs(xi); });
}

namespace {

Eigen::MatrixXd complement_basis(const Grid& g, const ConstraintSet& c) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto k = static_cast<Eigen::Index>(c.vectors.size());
  if (k == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd cm(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& v = c.vectors[static_cast<std::size_t>(i)];
    if (!(v.grid == g)) throw std::invalid_argument("constraint lives on a different grid");
    for (Eigen::Index j = 0; j < n; ++j) cm(j, i) = v[static_cast<std::size_t>(j)];
    cm.col(i).normalize();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(cm);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i)
    if (std::abs(r(i, i)) < 1e-10) throw std::runtime_error("constraint Gram matrix is near-singular");
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - k);
}

}  // namespace

double constrained_min_eigenvalue(const Eigen::MatrixXd& op, const Grid& g, const ConstraintSet& c, NormKind norm) {
  const Eigen::MatrixXd z = complement_basis(g, c);
  Eigen::MatrixXd az = z.transpose() * op * z;
  az = 0.5 * (az + az.transpose());
  if (norm == NormKind::l2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(az, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return es.eigenvalues().minCoeff();
  }
  Eigen::MatrixXd bz = z.transpose() * gram_matrix(g, norm) * z;
  bz = 0.5 * (bz + bz.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(az, bz, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  return es.eigenvalues().minCoeff();
}

double constrained_min_eigenvalue(Branch which, const GroundState& q, const ConstraintSet& c, NormKind norm) {
  return constrained_min_eigenvalue(LinearizedOperator(which, q).matrix(), q.grid(), c, norm);
}

RealField project_out(const RealField& v, const ConstraintSet& c) {
  const auto k = static_cast<Eigen::Index>(c.vectors.size());
  if (k == 0) return v;
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = inner(v, c.vectors[i]);
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = inner(c.vectors[i], c.vectors[j]);
  }
  const Eigen::VectorXd coef = gram.ldlt().solve(rhs);
  RealField out = v;
  for (Eigen::Index i = 0; i < k; ++i) out = out - coef(i) * c.vectors[i];
  return out;
}

namespace {

// \int ( 1/2 |R|^{p-1} |e|^2 + (p-1)/2 |R|^{p-3} (Re conj(R) e)^2 )
double potential_term(const Field& eps, const Field& r, double p, double floor) {
  double acc = 0.0;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const double a = std::abs(r[j]);
    const double proj = (std::conj(r[j]) * eps[j]).real();
    double cross;
    if (floor > 0.0) {
      const double u = proj / std::max(a, floor);
      cross = std::pow(a, p - 1.0) * u * u;
    } else {
      cross = std::pow(a, p - 3.0) * proj * proj;
      if (!std::isfinite(cross)) throw std::overflow_error("|R|^{p-3} factor overflowed");
    }
    acc += 0.5 * std::pow(a, p - 1.0) * std::norm(eps[j]) + 0.5 * (p - 1.0) * cross;
  }
  return acc * eps.grid.dx();
}

}  // namespace

double quadratic_form_h0(const Field& eps, const Field& r0, double omega_ref, double p, double floor) {
  if (!(eps.grid == r0.grid)) throw std::invalid_argument("fields live on different grids");
  return 0.5 * dirichlet_half(eps) + 0.5 * omega_ref * inner(eps, eps) - potential_term(eps, r0, p, floor);
}

double quadratic_form_hk(const Field& eps, std::span<const WaveTerm> waves, std::span<const RealField> cutoffs, double p,
                         double floor) {
  if (waves.size() != cutoffs.size()) throw std::invalid_argument("one cutoff per wave is required");
  double h = 0.5 * dirichlet_half(eps);
  for (std::size_t k = 0; k < waves.size(); ++k) {
    if (!(waves[k].profile.grid == eps.grid) || !(cutoffs[k].grid == eps.grid))
      throw std::invalid_argument("fields live on different grids");
    double weighted = 0.0;
    for (std::size_t j = 0; j < eps.size(); ++j) weighted += std::norm(eps[j]) * cutoffs[k][j];
    h += 0.5 * waves[k].omega0 * weighted * eps.grid.dx();
    h -= potential_term(eps, waves[k].profile, p, floor);
  }
  return h;
}

double localized_weight_value(double y, double R, double a) {
  const double z = std::abs(y) / R;
  if (z <= 1.0) return 1.0;
  if (z >= 2.0) return std::pow(z, -a);
  // quintic Hermite on [1, 2] in t = z - 1
  const double v0 = 1.0, d0 = 0.0, s0 = 0.0;
  const double v1 = std::pow(2.0, -a), d1 = -a * std::pow(2.0, -a - 1.0), s1 = a * (a + 1.0) * std::pow(2.0, -a - 2.0);
  const double t = z - 1.0, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, h1 = t - 6 * t3 + 8 * t4 - 3 * t5, h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5, h4 = -4 * t3 + 7 * t4 - 3 * t5, h5 = 0.5 * (t3 - 2 * t4 + t5);
  return v0 * h0 + d0 * h1 + s0 * h2 + v1 * h3 + d1 * h4 + s1 * h5;
}

RealField localized_weight(const Grid& g, double R, double a, double center) {
  if (!(R > 0.0)) throw std::invalid_argument("weight radius must be positive");
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("weight exponent must lie in (0, 1)");
  if (2.0 * R >= 0.5 * g.length()) throw std::invalid_argument("weight radius too large for the box");
  RealField w(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    // periodic distance to the center
    double y = std::remainder(g.point(j) - center, g.length());
    w[j] = localized_weight_value(y, R, a);
  }
  return w;
}

}  // namespace hwlab
