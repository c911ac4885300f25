#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hwlab/cutoffs.hpp"
#include "hwlab/experiments.hpp"
#include "hwlab/spectral.hpp"

using namespace hwlab;

namespace {

const Grid& big_grid() {
  static const Grid g(4096, 400.0);
  return g;
}

ProfileFamily& big_family() {
  static ProfileFamily f(big_grid(), 2.0);
  return f;
}

ExperimentConfig small_two_wave() {
  ExperimentConfig c;
  c.n = 2048;
  c.L = 200.0;
  c.T = 5.0;
  return c;
}

const StabilityReport& small_run() {
  static const StabilityReport r = run_two_wave_stability(small_two_wave());
  return r;
}

std::string summary_text(const StabilityReport& r) {
  std::ostringstream os;
  write_summary(os, r);
  return os.str();
}

}  // namespace

TEST(Cutoff, EdgesAndOrdering) {
  for (CutoffKind k : {CutoffKind::base, CutoffKind::plus, CutoffKind::minus}) {
    EXPECT_EQ(cutoff_profile(k, 0.0), 0.0);
    EXPECT_EQ(cutoff_profile(k, 5.0), 1.0);
  }
  EXPECT_EQ(cutoff_profile(CutoffKind::base, 1.0), 0.0);
  EXPECT_EQ(cutoff_profile(CutoffKind::base, 3.0), 1.0);
  for (int i = -100; i <= 700; ++i) {
    const double z = 0.005 * i;
    const double m = cutoff_profile(CutoffKind::minus, z), b = cutoff_profile(CutoffKind::base, z),
                 p = cutoff_profile(CutoffKind::plus, z);
    EXPECT_GE(m, b) << z;
    EXPECT_GE(b, p) << z;
  }
}

TEST(Cutoff, SlopeBound) {
  for (CutoffKind k : {CutoffKind::base, CutoffKind::plus, CutoffKind::minus}) {
    double worst = 0.0;
    for (int i = 1; i < 4000; ++i) {
      const double z = 1e-3 * i;
      worst = std::max(worst, std::abs(cutoff_profile(k, z + 1e-6) - cutoff_profile(k, z - 1e-6)) / 2e-6);
    }
    EXPECT_NEAR(worst, cutoff_slope(k), 1e-3 * cutoff_slope(k));
  }
}

TEST(Cutoff, FieldOrderingAndBoxCheck) {
  const Grid& g = big_grid();
  for (double t : {0.0, 10.0, 50.0}) {
    const RealField m = cutoff_field(two_wave_cutoff(CutoffKind::minus, -20, 20, t, 40, g).spec, g);
    const RealField b = cutoff_field(two_wave_cutoff(CutoffKind::base, -20, 20, t, 40, g).spec, g);
    const RealField p = cutoff_field(two_wave_cutoff(CutoffKind::plus, -20, 20, t, 40, g).spec, g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      EXPECT_GE(m[j], b[j]);
      EXPECT_GE(b[j], p[j]);
    }
  }
  EXPECT_THROW(cutoff_field(CutoffSpec{CutoffKind::base, 150.0, 30.0}, g), std::domain_error);
}

TEST(Cutoff, MovingScaleIsCapped) {
  const MovingCutoff c = two_wave_cutoff(CutoffKind::base, -20, 20, 0.0, 40.0, big_grid());
  EXPECT_TRUE(c.capped);
  EXPECT_DOUBLE_EQ(c.spec.scale, 5.0);
  // nested span [scale/2, 5 scale/2] centred on the midpoint
  EXPECT_DOUBLE_EQ(c.spec.anchor + 1.5 * c.spec.scale, 0.0);
}

TEST(LocalizedMass, UnitCutoff) {
  const WaveParams w{{Wave{1.0, 0.0, 0.3}}};
  const Field u = wave_sum(big_family(), w);
  const RealField one = sample(big_grid(), [](double) { return 1.0; });
  const double m = big_family().at(1.0).state.mass();
  EXPECT_NEAR(localized_mass(u, 1.3, one, false), 1.3 * m, 1e-12 * m);
  EXPECT_NEAR(localized_mass(u, 1.3, one, true), 0.65 * m, 1e-12 * m);
}

TEST(LocalizedMass, SolitonLeftAndRightOfTransition) {
  const double sigma = 80.0;
  const RealField phi = cutoff_field(two_wave_cutoff(CutoffKind::base, -40, 40, 0.0, sigma, big_grid()).spec, big_grid());
  const Field left = wave_sum(big_family(), WaveParams{{Wave{1.0, -40.0, 0.0}}});
  const Field right = wave_sum(big_family(), WaveParams{{Wave{1.1, 40.0, 0.0}}});
  EXPECT_LT(localized_mass(left, 1.0, phi, false), 1e-4);
  EXPECT_NEAR(localized_mass(right, 1.0, phi, false), big_family().at(1.1).state.mass(), 1e-4);
}

TEST(ComparisonIdentities, ZeroFieldIsDegenerate) {
  const WaveParams w{{Wave{0.9, -20.0, 0.0}, Wave{1.1, 20.0, 0.0}}};
  const ComparisonDefects c = comparison_identities(Field(big_grid()), w, 0.0, 0.0, 40.0, big_family());
  const double m1 = big_family().at(0.9).state.mass(), m2 = big_family().at(1.1).state.mass();
  EXPECT_TRUE(c.degenerate);
  EXPECT_DOUBLE_EQ(c.plus[0], 0.5 * (m1 + m2));
  EXPECT_DOUBLE_EQ(c.minus[0], -0.5 * (m1 + m2));
  EXPECT_DOUBLE_EQ(c.plus[1], 0.5 * m2);
  EXPECT_DOUBLE_EQ(c.minus[1], -0.5 * m2);
}

TEST(ComparisonIdentities, ExactSumIsTailOnly) {
  // quadrature phases remove the cross term Re(R_1 conj R_2) pointwise; what is left is the
  // x^{-2} tail crossing the transition, O(<sigma>^{-3})
  double defect[2];
  const double sigmas[2] = {40.0, 80.0};
  for (int i = 0; i < 2; ++i) {
    const double s = sigmas[i];
    const WaveParams w{{Wave{0.9, -s / 2, 0.0}, Wave{1.1, s / 2, 0.5 * std::numbers::pi}}};
    const ComparisonDefects c = comparison_identities(wave_sum(big_family(), w), w, 0.0, 0.0, s, big_family());
    const double sb = japanese_bracket(s);
    EXPECT_LT(c.max_ratio, 10.0);
    EXPECT_FALSE(c.flagged);
    EXPECT_FALSE(c.degenerate);
    defect[i] = c.max_ratio / (sb * sb * sb);
  }
  EXPECT_GT(defect[0] / defect[1], 6.0);
  EXPECT_LT(defect[0] / defect[1], 10.0);
}

TEST(Perturbation, NormsAndOrthogonality) {
  const WaveParams w{{Wave{0.9, -20.0, 0.0}, Wave{1.1, 20.0, 0.0}}};
  for (PerturbationKind k : {PerturbationKind::noise, PerturbationKind::shift, PerturbationKind::omega}) {
    const Field f = build_perturbation(k, w, 1e-2, 5, big_family());
    EXPECT_NEAR(sobolev_norm(f, 0.5), 1e-2, 1e-14);
  }
  const Field n = build_perturbation(PerturbationKind::noise, w, 1e-2, 5, big_family());
  for (const auto& wave : w.waves) {
    const WaveFields wf = wave_fields(big_family(), wave, false);
    EXPECT_NEAR(inner(n, wf.r), 0.0, 1e-15);
    EXPECT_NEAR(inner(n, wf.dr), 0.0, 1e-15);
    EXPECT_NEAR(inner(n, cplx(0, 1) * wf.r), 0.0, 1e-15);
  }
  EXPECT_EQ(max_abs(build_perturbation(PerturbationKind::noise, w, 0.0, 5, big_family())), 0.0);
  const Field again = build_perturbation(PerturbationKind::noise, w, 1e-2, 5, big_family());
  EXPECT_EQ(again.values, n.values);
}

TEST(Monotonicity, SingleSolitonFarFromCutoff) {
  const double sigma = 80.0;
  const Field u0 = wave_sum(big_family(), WaveParams{{Wave{1.0, -40.0, 0.0}}});
  EvolveOptions o;
  o.stride = 1.0;
  const Trajectory tr = evolve(u0, 50.0, 1e-3, 2.0, o);
  const std::vector<double> x1(tr.times.size(), -40.0), x2(tr.times.size(), 40.0);
  for (CutoffKind k : {CutoffKind::base, CutoffKind::plus, CutoffKind::minus}) {
    const MonotonicityReport r = monotonicity_from_positions(tr, x1, x2, 1.0, 0.0, sigma, k);
    EXPECT_LT(r.max_increase, 1e-4);
    EXPECT_TRUE(r.capped);
  }
}

TEST(Monotonicity, ReversedTrajectoryShowsSameMagnitude) {
  ExperimentConfig cfg = small_two_wave();
  ProfileFamily fam(Grid(cfg.n, cfg.L), cfg.p);
  const InitialData data = build_two_wave_data(cfg, fam);
  EvolveOptions o;
  o.stride = 0.5;
  const Trajectory tr = evolve(data.u0, cfg.T, cfg.dt, cfg.p, o);
  const ParameterSeries s = track(tr, fam, 2, {}, data.params);
  const MonotonicityReport fwd = monotonicity_report(tr, s, cfg.sigma, CutoffKind::base);
  Trajectory rev = tr;
  ParameterSeries rs = s;
  std::reverse(rev.snapshots.begin(), rev.snapshots.end());
  std::reverse(rs.rows.begin(), rs.rows.end());
  const MonotonicityReport back = monotonicity_report(rev, rs, cfg.sigma, CutoffKind::base);
  const double a = fwd.max_increase + fwd.max_decrease, b = back.max_increase + back.max_decrease;
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(b / a, 1.0, 0.5);
}

TEST(SingleWave, ExactSolitonDeviatesOnlyBySplittingError) {
  ExperimentConfig c;
  c.omega1 = 1.0;
  c.alpha = 0.0;
  c.n = 2048;
  c.L = 200.0;
  c.T = 10.0;
  const StabilityReport coarse = run_single_wave_stability(c);
  c.dt = 5e-4;
  const StabilityReport fine = run_single_wave_stability(c);
  for (const StabilityReport* r : {&coarse, &fine}) {
    EXPECT_TRUE(r->tracking_complete);
    EXPECT_EQ(exit_status(*r), 0);
    EXPECT_LT(r->max_omega_drift, 1e-10);
  }
  EXPECT_LT(coarse.sup_eps_h_half, 2e-6);
  EXPECT_NEAR(coarse.sup_eps_h_half / fine.sup_eps_h_half, 4.0, 0.4);
}

TEST(TwoWave, ShortRunBookkeeping) {
  const StabilityReport& r = small_run();
  ASSERT_TRUE(r.tracking_complete);
  EXPECT_EQ(r.records.size(), 11u);
  const double band = r.config.A0 * r.band_level;
  EXPECT_DOUBLE_EQ(r.band_level, r.config.alpha + 1.0 / japanese_bracket(r.config.sigma));
  double sup = 0.0, g_scale = 0.0;
  for (const auto& rec : r.records) {
    sup = std::max(sup, rec.eps_h_half);
    // band membership equals the sup-so-far inequality
    EXPECT_EQ(rec.in_band, sup <= band);
    g_scale = std::max(g_scale, std::abs(rec.g_direct));
    EXPECT_NEAR(rec.g_from_parts, rec.g_direct, 1e-12 * std::abs(rec.g_direct));
    EXPECT_GE(rec.j2_minus * 2.0, rec.j2_plus * 2.0);
  }
  EXPECT_LE(r.g_bookkeeping_defect, 1e-12 * g_scale);
  EXPECT_DOUBLE_EQ(r.sup_eps_h_half, sup);
  EXPECT_NEAR(r.min_A0, sup / r.band_level, 1e-15);
  EXPECT_LT(r.conservation.mass_drift, 1e-12);
  EXPECT_TRUE(r.cutoff_capped);
  EXPECT_GT(r.parameter_control_constant, 0.0);
  // group speed is at most 1: nothing from x = +-20 reaches |x| >= 75 by t = 5
  EXPECT_FALSE(r.wrap_horizon.has_value());
  EXPECT_LT(r.records.back().edge_eps_mass, 1e-6 * r.records.back().conserved.mass);
}

TEST(TwoWave, Deterministic) {
  const StabilityReport again = run_two_wave_stability(small_two_wave());
  EXPECT_EQ(summary_text(again), summary_text(small_run()));
}

TEST(TwoWave, CollisionReportsExit) {
  ExperimentConfig c = small_two_wave();
  c.sigma = 5.0;
  c.sigma_min = 4.0;
  c.alpha = 0.0;
  c.omega1 = c.omega2 = 1.0;
  c.T = 20.0;
  const StabilityReport r = run_two_wave_stability(c);
  ASSERT_TRUE(r.t_star.has_value());
  EXPECT_EQ(exit_status(r), 2);
  EXPECT_NE(r.exit_reason, "none");
}

TEST(TwoWave, Validation) {
  ExperimentConfig c = small_two_wave();
  c.sigma = 10.0;
  EXPECT_THROW(run_two_wave_stability(c), std::invalid_argument);
  c = small_two_wave();
  c.p = 1.0;
  EXPECT_THROW(run_two_wave_stability(c), std::invalid_argument);
  c = small_two_wave();
  c.dt = 3e-3;
  c.stride = 0.5;
  c.T = 1.0;
  EXPECT_THROW(run_two_wave_stability(c), std::invalid_argument);
}
