#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hwlab/ground_state.hpp"
#include "hwlab/linearized.hpp"
#include "hwlab/spectral.hpp"

using namespace hwlab;
using std::numbers::pi;

namespace {

const Grid& reference_grid() {
  static const Grid g(8192, 400.0);
  return g;
}

SolverOptions whole_line() {
  SolverOptions o;
  o.model = DomainModel::whole_line;
  return o;
}

double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(GroundState, AnalyticProfileForQuadratic) {
  const GroundState q = solve_ground_state(1.0, 2.0, reference_grid(), whole_line());
  const RealField exact = sample(reference_grid(), [](double x) { return 2.0 / (1 + x * x); });
  EXPECT_LT(max_diff(q.profile, exact), 1e-8);
  EXPECT_LT(q.residual, 1e-10);
  EXPECT_NEAR(q.mass(), 2 * pi, 1e-4);
}

TEST(GroundState, AnalyticProfileFromDistantGuess) {
  SolverOptions o = whole_line();
  o.initial = sample(reference_grid(), [](double x) { return 1.5 / std::cosh(x); });
  const GroundState q = solve_ground_state(1.0, 2.0, reference_grid(), o);
  const RealField exact = sample(reference_grid(), [](double x) { return 2.0 / (1 + x * x); });
  EXPECT_GT(q.iterations, 10);
  EXPECT_LT(max_diff(q.profile, exact), 1e-8);
  EXPECT_LT(q.residual, 1e-10);
}

TEST(GroundState, PeriodicModelIsADiscreteSolution) {
  const Grid g(1024, 200.0);
  for (double p : {1.5, 2.0, 2.5}) {
    const GroundState q = solve_ground_state(1.0, p, g);
    EXPECT_LT(q.residual, 1e-10) << p;
    EXPECT_LT(elliptic_residual(q), 1e-10) << p;
  }
}

TEST(GroundState, EvenAndPositive) {
  for (double p : {1.5, 2.0, 2.5}) {
    for (DomainModel m : {DomainModel::periodic, DomainModel::whole_line}) {
      SolverOptions o;
      o.model = m;
      const GroundState q = solve_ground_state(1.0, p, reference_grid(), o);
      const Grid& g = q.grid();
      double asym = 0.0, lo = 1e300;
      for (std::size_t j = 1; j < g.size(); ++j) {
        asym = std::max(asym, std::abs(q.profile[j] - q.profile[g.mirror(j)]));
        lo = std::min(lo, q.profile[j]);
      }
      EXPECT_LT(asym, 1e-12);
      EXPECT_GT(lo, 0.0);
    }
  }
}

TEST(GroundState, PohozaevPairing) {
  // <DQ, Q> + w M = \int Q^{p+1}
  for (double p : {1.5, 2.0, 2.5}) {
    const GroundState q = solve_ground_state(0.8, p, Grid(2048, 200.0));
    const Field qc = to_complex(q.profile);
    const double lhs = dirichlet_half(qc) + q.omega * inner(q.profile, q.profile);
    double rhs = 0.0;
    for (double v : q.profile.values) rhs += std::pow(v, p + 1);
    rhs *= q.grid().dx();
    EXPECT_NEAR(lhs, rhs, 1e-9 * rhs) << p;
  }
}

TEST(GroundState, RescaleMatchesDirectSolve) {
  const GroundState q1 = solve_ground_state(1.0, 2.0, reference_grid(), whole_line());
  const GroundState r = rescale_ground_state(q1, 2.0);
  const GroundState d = solve_ground_state(2.0, 2.0, reference_grid(), whole_line());
  EXPECT_LT(max_diff(r.profile, d.profile), 1e-6);
  EXPECT_NEAR(r.profile[reference_grid().size() / 2], 4.0, 1e-10);
}

TEST(GroundState, RescaleIdentity) {
  const GroundState q1 = solve_ground_state(1.0, 1.5, reference_grid(), whole_line());
  const GroundState r = rescale_ground_state(q1, 1.0);
  EXPECT_LT(max_diff(r.profile, q1.profile), 1e-14);
}

TEST(GroundState, RescaledMassLaw) {
  for (double p : {1.5, 2.0, 2.5}) {
    const GroundState q1 = solve_ground_state(1.0, p, reference_grid(), whole_line());
    for (double w : {0.5, 2.0}) {
      const GroundState r = rescale_ground_state(q1, w);
      const double expect = std::pow(w, (3 - p) / (p - 1)) * q1.mass();
      EXPECT_NEAR(r.mass() / expect, 1.0, 1e-6) << p << " " << w;
    }
  }
}

TEST(GroundState, RescaleOfPeriodicProfileRejected) {
  const GroundState q = solve_ground_state(1.0, 2.0, Grid(1024, 200.0));
  EXPECT_THROW(rescale_ground_state(q, 2.0), std::invalid_argument);
}

TEST(MassLaw, Slopes) {
  const std::vector<double> omegas{0.5, 1.0, 2.0};
  for (double p : {1.5, 2.0, 2.5}) {
    const MassLaw law = mass_of_omega(p, omegas, reference_grid());
    const double expect = (3 - p) / (p - 1);
    EXPECT_NEAR(law.slope, expect, 1e-3) << p;
    EXPECT_GT(law.slope, 0.0);
    const double m1 = law.samples[1].second;
    for (const auto& [w, m] : law.samples) EXPECT_NEAR(m / (std::pow(w, expect) * m1), 1.0, 1e-6) << p << " " << w;
  }
}

TEST(OmegaDerivative, LinearizedIdentityAndPairing) {
  const Grid g(1024, 200.0);
  const GroundState q = solve_ground_state(1.0, 2.0, g);
  const RealField s = omega_derivative_profile(1.0, 2.0, g);
  const RealField res = apply_linearized(Branch::plus, q, s) + q.profile;
  EXPECT_LT(l2_norm(res) / l2_norm(q.profile), 1e-3);
  const GroundState qw = solve_ground_state(1.0, 2.0, reference_grid(), whole_line());
  const RealField sw = omega_derivative_profile(1.0, 2.0, reference_grid(), 0.0, whole_line());
  EXPECT_NEAR(inner(sw, qw.profile), pi, 1e-3);
  for (double p : {1.5, 2.5}) EXPECT_GT(inner(omega_derivative_profile(1.0, p, g), solve_ground_state(1.0, p, g).profile), 0.0);
}

TEST(DecayFit, AnalyticProfile) {
  const RealField f = sample(reference_grid(), [](double x) { return 2.0 / (1 + x * x); });
  const DecayFit d = fit_decay(f, 50.0, 100.0);
  EXPECT_NEAR(d.exponent, -2.0, 0.05);
  EXPECT_TRUE(d.matches);
}

TEST(DecayFit, GaussianIsFlagged) {
  const Grid g(1024, 40.0);
  const RealField f = sample(g, [](double x) { return std::exp(-x * x / 8.0); });
  const DecayFit d = fit_decay(f, 5.0, 10.0);
  EXPECT_LT(d.exponent, -4.0);
  EXPECT_FALSE(d.matches);
}

TEST(DecayFit, SolvedProfiles) {
  const GroundState q = solve_ground_state(1.0, 1.5, reference_grid(), whole_line());
  EXPECT_NEAR(fit_decay(q).exponent, -2.0, 0.1);
  EXPECT_TRUE(fit_decay(q).matches);
}

TEST(GroundState, BadParameters) {
  EXPECT_THROW(solve_ground_state(-1.0, 2.0, Grid(256, 100.0)), std::invalid_argument);
  EXPECT_THROW(solve_ground_state(1.0, 1.0, Grid(256, 100.0)), std::invalid_argument);
}
