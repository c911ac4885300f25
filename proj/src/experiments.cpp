#include "hwlab/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "hwlab/io.hpp"
#include "hwlab/linearized.hpp"
#include "hwlab/rng.hpp"
#include "hwlab/spectral.hpp"

namespace hwlab {

namespace {

constexpr double kNoiseBand = 2.0;
constexpr double kNoiseEnvelope = 4.0;
constexpr double kShift = 1.0;
constexpr double kOmegaFactor = 0.05;
constexpr double kFlagRatio = 10.0;

double periodic_offset(double x, double c, double L) { return std::remainder(x - c, L); }

Field scaled_to(const Field& f, double alpha) {
  const double nrm = sobolev_norm(f, 0.5);
  if (alpha == 0.0) return Field(f.grid);
  if (!(nrm > 0.0)) throw std::runtime_error("perturbation direction vanished");
  return cplx(alpha / nrm) * f;
}

// Removes the span of {R_k, dR_k, i R_k} in the real L2 inner product.
Field project_off_constraints(const Field& f, const WaveParams& truth, ProfileFamily& family) {
  std::vector<Field> dirs;
  for (const auto& w : truth.waves) {
    WaveFields wf = wave_fields(family, w, false);
    dirs.push_back(wf.r);
    dirs.push_back(wf.dr);
    dirs.push_back(cplx(0.0, 1.0) * wf.r);
  }
  const std::size_t m = dirs.size();
  Eigen::MatrixXd G(m, m);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    b(i) = inner(f, dirs[i]);
    for (std::size_t j = 0; j < m; ++j) G(i, j) = inner(dirs[i], dirs[j]);
  }
  const Eigen::VectorXd c = G.ldlt().solve(b);
  Field out = f;
  for (std::size_t i = 0; i < m; ++i) out = out - cplx(c(i)) * dirs[i];
  return out;
}

double weighted_mass(const Field& u, const RealField& w) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += std::norm(u[j]) * w[j];
  return acc * u.grid.dx();
}

double mass_of(const Field& u) {
  double acc = 0.0;
  for (const auto& v : u.values) acc += std::norm(v);
  return acc * u.grid.dx();
}

struct JValues {
  double base = 0.0, plus = 0.0, minus = 0.0;
  bool capped = false;
};

// J_2 = w \int |u|^2 Phi, J_2^{+-} = w/2 \int |u|^2 Phi^{+-}
JValues j_values(const Field& u, double x1, double x2, double t, double sigma, double omega_ref) {
  JValues j;
  const MovingCutoff b = two_wave_cutoff(CutoffKind::base, x1, x2, t, sigma, u.grid);
  const MovingCutoff p = two_wave_cutoff(CutoffKind::plus, x1, x2, t, sigma, u.grid);
  const MovingCutoff m = two_wave_cutoff(CutoffKind::minus, x1, x2, t, sigma, u.grid);
  j.base = localized_mass(u, omega_ref, cutoff_field(b.spec, u.grid), false);
  j.plus = localized_mass(u, omega_ref, cutoff_field(p.spec, u.grid), true);
  j.minus = localized_mass(u, omega_ref, cutoff_field(m.spec, u.grid), true);
  j.capped = b.capped;
  return j;
}

double pick(const JValues& j, CutoffKind kind) {
  switch (kind) {
    case CutoffKind::plus: return j.plus;
    case CutoffKind::minus: return j.minus;
    default: return j.base;
  }
}

MonotonicityReport summarize(CutoffKind kind, const std::vector<double>& times, const std::vector<double>& values,
                             double sup_eps_l2_sq, double sigma, bool capped) {
  MonotonicityReport r;
  r.kind = kind;
  r.times = times;
  r.sup_eps_l2_sq = sup_eps_l2_sq;
  r.capped = capped;
  for (double v : values) {
    const double c = v - values.front();
    r.change.push_back(c);
    r.max_increase = std::max(r.max_increase, c);
    r.max_decrease = std::max(r.max_decrease, -c);
  }
  r.c_emp = sigma * r.max_increase / (sup_eps_l2_sq + 1.0);
  return r;
}

struct StopRun {};

}  // namespace

PerturbationKind parse_perturbation_kind(const std::string& s) {
  if (s == "noise") return PerturbationKind::noise;
  if (s == "shift") return PerturbationKind::shift;
  if (s == "omega") return PerturbationKind::omega;
  throw std::invalid_argument("unknown perturbation kind '" + s + "' (expected noise, shift or omega)");
}

std::string to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::shift: return "shift";
    case PerturbationKind::omega: return "omega";
    default: return "noise";
  }
}

Field build_perturbation(PerturbationKind kind, const WaveParams& truth, double alpha, std::uint64_t seed,
                         ProfileFamily& family) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and non-negative");
  const Grid& g = family.grid();
  Field dir(g);
  switch (kind) {
    case PerturbationKind::noise: {
      Rng rng(seed);
      std::vector<cplx> c(g.size(), cplx{});
      for (std::size_t m = 0; m < g.size(); ++m) {
        if (m == g.nyquist_index() || std::abs(g.wavenumber(m)) > kNoiseBand) continue;
        const double re = rng.normal();
        const double im = rng.normal();
        c[m] = cplx(re, im);
      }
      Field band = from_spectrum(g, std::move(c));
      for (std::size_t j = 0; j < g.size(); ++j) {
        double env = 0.0;
        for (const auto& w : truth.waves) {
          const double y = periodic_offset(g.point(j), w.x, g.length()) / kNoiseEnvelope;
          env += std::exp(-y * y);
        }
        band[j] *= env;
      }
      dir = project_off_constraints(band, truth, family);
      break;
    }
    case PerturbationKind::shift:
      for (const auto& w : truth.waves) {
        Wave moved = w;
        moved.x += kShift;
        dir = dir + (wave_fields(family, moved, false).r - wave_fields(family, w, false).r);
      }
      break;
    case PerturbationKind::omega:
      for (const auto& w : truth.waves) {
        Wave moved = w;
        moved.omega *= 1.0 + kOmegaFactor;
        dir = dir + (wave_fields(family, moved, false).r - wave_fields(family, w, false).r);
      }
      break;
  }
  return scaled_to(dir, alpha);
}

namespace {

InitialData assemble(const ExperimentConfig& cfg, WaveParams params, ProfileFamily& family) {
  InitialData d{params, Field(family.grid()), Field(family.grid())};
  d.perturbation = build_perturbation(cfg.perturbation_kind, params, cfg.alpha, cfg.seed, family);
  d.u0 = wave_sum(family, params) + d.perturbation;
  return d;
}

}  // namespace

InitialData build_single_wave_data(const ExperimentConfig& cfg, ProfileFamily& family) {
  WaveParams params{{Wave{cfg.omega1, 0.0, cfg.gamma1}}};
  return assemble(cfg, params, family);
}

InitialData build_two_wave_data(const ExperimentConfig& cfg, ProfileFamily& family) {
  WaveParams params{{Wave{cfg.omega1, -0.5 * cfg.sigma, cfg.gamma1}, Wave{cfg.omega2, 0.5 * cfg.sigma, cfg.gamma2}}};
  return assemble(cfg, params, family);
}

double localized_mass(const Field& u, double omega_ref, const RealField& cutoff, bool half) {
  if (!(u.grid == cutoff.grid)) throw std::invalid_argument("fields live on different grids");
  const double j = omega_ref * weighted_mass(u, cutoff);
  return half ? 0.5 * j : j;
}

ComparisonDefects comparison_identities(const Field& u, const WaveParams& params, double eps_h_half, double t, double sigma,
                                        ProfileFamily& family) {
  if (params.waves.size() != 2) throw std::invalid_argument("comparison identities need two waves");
  ComparisonDefects c;
  const double x1 = params.waves[0].x, x2 = params.waves[1].x;
  const double m1 = family.at(params.waves[0].omega).state.mass();
  const double m2 = family.at(params.waves[1].omega).state.mass();
  const double mu = mass_of(u);
  c.degenerate = !(mu > 0.0);

  // k = 1: Phi_1 = Phi_1^{+-} = 1
  c.plus[0] = 0.5 * mu - mu + 0.5 * (m1 + m2);
  c.minus[0] = mu - 0.5 * mu - 0.5 * (m1 + m2);
  const JValues j = j_values(u, x1, x2, t, sigma, 1.0);
  c.plus[1] = j.plus - j.base + 0.5 * m2;
  c.minus[1] = j.base - j.minus - 0.5 * m2;

  const double sb = japanese_bracket(sigma);
  c.budget = eps_h_half * eps_h_half + 1.0 / (sb * sb * sb);
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) worst = std::max({worst, std::abs(c.plus[k]), std::abs(c.minus[k])});
  c.max_ratio = worst / c.budget;
  c.flagged = c.max_ratio > kFlagRatio;
  return c;
}

MonotonicityReport monotonicity_from_positions(const Trajectory& traj, const std::vector<double>& x1,
                                               const std::vector<double>& x2, double omega_ref, double sup_eps_l2_sq,
                                               double sigma, CutoffKind kind) {
  const std::size_t N = std::min({traj.snapshots.size(), x1.size(), x2.size()});
  if (N == 0) throw std::invalid_argument("monotonicity needs at least one sample");
  std::vector<double> times, values;
  bool capped = true;
  for (std::size_t i = 0; i < N; ++i) {
    const JValues j = j_values(traj.snapshots[i], x1[i], x2[i], traj.times[i], sigma, omega_ref);
    times.push_back(traj.times[i]);
    values.push_back(pick(j, kind));
    capped = capped && j.capped;
  }
  return summarize(kind, times, values, sup_eps_l2_sq, sigma, capped);
}

MonotonicityReport monotonicity_report(const Trajectory& traj, const ParameterSeries& series, double sigma, CutoffKind kind) {
  if (series.rows.empty() || series.rows.front().waves.size() != 2)
    throw std::invalid_argument("monotonicity needs a two-wave parameter series");
  std::vector<double> x1, x2;
  double sup = 0.0;
  for (const auto& r : series.rows) {
    x1.push_back(r.waves[0].x);
    x2.push_back(r.waves[1].x);
    sup = std::max(sup, r.eps_l2 * r.eps_l2);
  }
  return monotonicity_from_positions(traj, x1, x2, series.rows.front().waves[1].omega, sup, sigma, kind);
}

void validate(const ExperimentConfig& cfg, std::size_t waves) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(std::isfinite(cfg.p) && cfg.p > 1.0, "p must exceed 1");
  require(cfg.omega1 > 0.0 && std::isfinite(cfg.omega1), "omega1 must be positive");
  require(waves < 2 || (cfg.omega2 > 0.0 && std::isfinite(cfg.omega2)), "omega2 must be positive");
  require(cfg.alpha >= 0.0 && std::isfinite(cfg.alpha), "alpha must be non-negative");
  require(cfg.dt > 0.0 && cfg.T >= 0.0 && cfg.stride > 0.0, "dt and stride must be positive, T non-negative");
  require(cfg.A0 > 0.0, "A0 must be positive");
  require(cfg.R_weight > 0.0, "R_weight must be positive");
  require(cfg.a_exponent > 0.0 && cfg.a_exponent < 1.0, "a_exponent must lie in (0, 1)");
  require(cfg.newton_tol > 0.0, "newton_tol must be positive");
  require(cfg.L > 0.0, "L must be positive");
  if (waves == 2) {
    require(cfg.sigma >= cfg.sigma_min, "sigma below sigma_min");
    require(cfg.sigma < 0.5 * cfg.L, "sigma must stay below L/2 so the waves do not interact through the boundary");
  }
}

namespace {

StabilityReport run(const ExperimentConfig& cfg, std::size_t K) {
  validate(cfg, K);
  const Grid g(cfg.n, cfg.L);
  ProfileFamily family(g, cfg.p);
  const InitialData data = K == 1 ? build_single_wave_data(cfg, family) : build_two_wave_data(cfg, family);

  StabilityReport rep;
  rep.config = cfg;
  rep.wave_count = K;
  const double sb = japanese_bracket(cfg.sigma);
  // one wave: floored at the resolution of the decomposition so exact data keeps a nonempty tube
  rep.band_level = K == 2 ? cfg.alpha + 1.0 / sb : std::max(cfg.alpha, std::sqrt(cfg.newton_tol));
  const double band = cfg.A0 * rep.band_level;

  NewtonOptions nopts;
  nopts.tol = cfg.newton_tol;
  Tracker tracker(family, K, nopts);
  tracker.seed(data.params);

  std::vector<double> w0;
  ConservedTriple current{};
  Trajectory conserved_only;
  double sup_eps_sq_so_far = 0.0;
  double eps0_l2_sq = 0.0;
  std::vector<double> jb, jp, jm, jt;
  const double initial_mass = mass_of(data.u0);

  tracker.set_observer([&](const Field& u, const Decomposition& d, const SeriesRow& row) {
    StrideRecord rec;
    rec.t = row.t;
    rec.waves = row.waves;
    rec.eps_l2 = d.eps_l2;
    rec.eps_h_half = d.eps_h_half;
    rec.orthogonality_residual = d.orthogonality_residual;
    rec.conserved = current;
    if (w0.empty()) {
      for (const auto& w : row.waves) w0.push_back(w.omega);
      rep.eps0_h_half = d.eps_h_half;
      eps0_l2_sq = d.eps_l2 * d.eps_l2;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double dw = std::abs(row.waves[k].omega - w0[k]);
      rec.omega_drift_sum += dw;
      worst = std::max(worst, dw);
    }
    rep.max_omega_drift = std::max(rep.max_omega_drift, worst);
    rep.max_omega_drift_sum = std::max(rep.max_omega_drift_sum, rec.omega_drift_sum);
    rep.sup_eps_h_half = std::max(rep.sup_eps_h_half, d.eps_h_half);
    rep.sup_eps_l2 = std::max(rep.sup_eps_l2, d.eps_l2);
    sup_eps_sq_so_far = std::max(sup_eps_sq_so_far, d.eps_h_half * d.eps_h_half);

    Field ref(g);
    for (std::size_t k = 0; k < K; ++k) {
      Wave w = row.waves[k];
      w.omega = w0[k];
      ref = ref + wave_fields(family, w, false).r;
    }
    rec.reference_distance = sobolev_norm(u - ref, 0.5);
    rep.sup_reference_distance = std::max(rep.sup_reference_distance, rec.reference_distance);

    RealField eps_sq(g);
    for (std::size_t j = 0; j < g.size(); ++j) eps_sq[j] = std::norm(d.eps[j]);
    for (const auto& w : row.waves) rec.localized_eps.push_back(inner(localized_weight(g, cfg.R_weight, cfg.a_exponent, w.x), eps_sq));
    // radiation reaching the seam at +-L/2, where the periodic copies meet
    for (std::size_t j = 0; j < g.size(); ++j)
      if (std::abs(g.point(j)) >= 0.375 * g.length()) rec.edge_eps_mass += eps_sq[j];
    rec.edge_eps_mass *= g.dx();
    if (!rep.wrap_horizon && rec.edge_eps_mass > 1e-6 * initial_mass) rep.wrap_horizon = row.t;

    rec.in_band = d.eps_h_half <= band;

    if (K == 1) {
      const double e0 = rep.eps0_h_half * rep.eps0_h_half;
      if (e0 > 0.0) rep.energy_law_constant = std::max(rep.energy_law_constant, (d.eps_h_half * d.eps_h_half + worst) / e0);
      const double q = d.eps_l2 * d.eps_l2 + eps0_l2_sq;
      if (q > 0.0) rep.quadratic_law_constant = std::max(rep.quadratic_law_constant, worst / q);
    } else {
      const double x1 = row.waves[0].x, x2 = row.waves[1].x;
      const JValues j = j_values(u, x1, x2, row.t, cfg.sigma, w0[1]);
      rec.j1 = w0[0] * mass_of(u);
      rec.j2 = j.base;
      rec.j2_plus = j.plus;
      rec.j2_minus = j.minus;
      rep.cutoff_capped = j.capped;
      jt.push_back(row.t);
      jb.push_back(j.base);
      jp.push_back(j.plus);
      jm.push_back(j.minus);

      rec.g_from_parts = current.energy + 0.5 * (rec.j1 + rec.j2);
      const CutoffSpec base_spec = two_wave_cutoff(CutoffKind::base, x1, x2, row.t, cfg.sigma, g).spec;
      const RealField phi = cutoff_field(base_spec, g);
      rep.composite_cutoff_slope = std::max(rep.composite_cutoff_slope, cutoff_field_slope(base_spec));
      RealField combined(g);
      for (std::size_t i = 0; i < g.size(); ++i) combined[i] = w0[0] + w0[1] * phi[i];
      rec.g_direct = current.energy + 0.5 * weighted_mass(u, combined);
      rep.g_bookkeeping_defect = std::max(rep.g_bookkeeping_defect, std::abs(rec.g_from_parts - rec.g_direct));

      rec.comparison = comparison_identities(u, WaveParams{row.waves}, d.eps_h_half, row.t, cfg.sigma, family);
      rep.comparison_max_ratio = std::max(rep.comparison_max_ratio, rec.comparison.max_ratio);
      if (rec.comparison.flagged) ++rep.comparison_flags;

      rep.parameter_control_constant =
          std::max(rep.parameter_control_constant, rec.omega_drift_sum / (sup_eps_sq_so_far + 1.0 / cfg.sigma));
    }
    rep.records.push_back(std::move(rec));
  });

  EvolveOptions eo;
  eo.stride = cfg.stride;
  eo.wall_budget = cfg.wall_budget;
  eo.keep_snapshots = false;
  auto monitor = [&](double t, const Field& u, const ConservedTriple& q) {
    current = q;
    conserved_only.times.push_back(t);
    conserved_only.conserved.push_back(q);
    bool ok = false;
    try {
      ok = tracker.update(t, u);
    } catch (const DecompositionError& e) {
      rep.tracking_complete = false;
      rep.t_star = t;
      rep.exit_reason = std::string("decomposition: ") + e.what();
      throw StopRun{};
    }
    if (!ok) {
      rep.tracking_complete = false;
      rep.t_star = t;
      rep.exit_reason = "decomposition: " + tracker.series().exit_reason;
      throw StopRun{};
    }
    if (!rep.records.back().in_band) {
      rep.t_star = t;
      rep.exit_reason = "band";
      throw StopRun{};
    }
  };
  try {
    evolve(data.u0, cfg.T, cfg.dt, cfg.p, eo, monitor);
  } catch (const StopRun&) {
  }

  rep.series = tracker.series();
  rep.band_held = !rep.t_star.has_value();
  rep.min_A0 = rep.band_level > 0.0 ? rep.sup_eps_h_half / rep.band_level : std::numeric_limits<double>::infinity();
  if (rep.band_level == 0.0 && rep.sup_eps_h_half == 0.0) rep.min_A0 = 0.0;
  conserved_only.dt = cfg.dt;
  conserved_only.p = cfg.p;
  conserved_only.stride = cfg.stride;
  rep.conservation = conservation_report(conserved_only);
  if (rep.series.rows.size() >= 3) rep.rate_max_ratio = modulation_rates(rep.series, cfg.sigma).max_ratio;

  if (K == 2) {
    const double sup_l2_sq = rep.sup_eps_l2 * rep.sup_eps_l2;
    rep.monotonicity[0] = summarize(CutoffKind::base, jt, jb, sup_l2_sq, cfg.sigma, rep.cutoff_capped);
    rep.monotonicity[1] = summarize(CutoffKind::plus, jt, jp, sup_l2_sq, cfg.sigma, rep.cutoff_capped);
    rep.monotonicity[2] = summarize(CutoffKind::minus, jt, jm, sup_l2_sq, cfg.sigma, rep.cutoff_capped);
  }
  return rep;
}

}  // namespace

StabilityReport run_single_wave_stability(const ExperimentConfig& cfg) { return run(cfg, 1); }
StabilityReport run_two_wave_stability(const ExperimentConfig& cfg) { return run(cfg, 2); }

int exit_status(const StabilityReport& r) { return r.t_star ? 2 : 0; }

void write_summary(std::ostream& os, const StabilityReport& r) {
  SummaryWriter s(os);
  s.put("waves", static_cast<long long>(r.wave_count));
  s.put("p", r.config.p);
  s.put("sigma", r.config.sigma);
  s.put("alpha", r.config.alpha);
  s.put("perturbation_kind", to_string(r.config.perturbation_kind));
  s.put("eps0_h_half", r.eps0_h_half);
  s.put("sup_eps_h_half", r.sup_eps_h_half);
  s.put("sup_eps_l2", r.sup_eps_l2);
  s.put("max_omega_drift", r.max_omega_drift);
  s.put("max_omega_drift_sum", r.max_omega_drift_sum);
  s.put("sup_reference_distance", r.sup_reference_distance);
  s.put("wrap_horizon", r.wrap_horizon);
  s.put("band_level", r.band_level);
  s.put("min_A0", r.min_A0);
  s.put("band_held", r.band_held);
  s.put("tracking_complete", r.tracking_complete);
  s.put("t_star", r.t_star);
  s.put("exit_reason", r.exit_reason);
  if (r.wave_count == 1) {
    s.put("energy_law_constant", r.energy_law_constant);
    s.put("quadratic_law_constant", r.quadratic_law_constant);
  } else {
    const char* names[3] = {"base", "plus", "minus"};
    for (int k = 0; k < 3; ++k) {
      s.put(std::string("j2_") + names[k] + "_max_increase", r.monotonicity[k].max_increase);
      s.put(std::string("j2_") + names[k] + "_max_decrease", r.monotonicity[k].max_decrease);
      s.put(std::string("j2_") + names[k] + "_c_emp", r.monotonicity[k].c_emp);
    }
    s.put("cutoff_capped", r.cutoff_capped);
    s.put("base_cutoff_slope", cutoff_slope(CutoffKind::base));
    s.put("composite_cutoff_slope", r.composite_cutoff_slope);
    s.put("comparison_max_ratio", r.comparison_max_ratio);
    s.put("comparison_flags", static_cast<long long>(r.comparison_flags));
    s.put("parameter_control_constant", r.parameter_control_constant);
    s.put("g_bookkeeping_defect", r.g_bookkeeping_defect);
  }
  s.put("rate_max_ratio", r.rate_max_ratio);
  s.put("energy_drift", r.conservation.energy_drift);
  s.put("mass_drift", r.conservation.mass_drift);
  s.put("momentum_drift", r.conservation.momentum_drift);
  s.put("strides", static_cast<long long>(r.records.size()));
}

void write_report(const StabilityReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t K = r.wave_count;
  {
    std::ofstream os(dir / "series.csv");
    std::vector<std::string> h{"t"};
    for (std::size_t k = 1; k <= K; ++k)
      for (const char* n : {"omega", "x", "gamma"}) h.push_back(std::string(n) + std::to_string(k));
    for (const char* n : {"eps_l2", "eps_h_half", "orthogonality_residual"}) h.push_back(n);
    CsvWriter w(os, h);
    for (const auto& row : r.series.rows) {
      std::vector<double> v{row.t};
      for (const auto& wv : row.waves) v.insert(v.end(), {wv.omega, wv.x, wv.gamma});
      v.insert(v.end(), {row.eps_l2, row.eps_h_half, row.orthogonality_residual});
      w.row(v);
    }
  }
  {
    std::ofstream os(dir / "strides.csv");
    std::vector<std::string> h{"t", "eps_h_half", "omega_drift_sum", "reference_distance", "in_band", "edge_eps_mass"};
    for (std::size_t k = 1; k <= K; ++k) h.push_back("localized_eps" + std::to_string(k));
    if (K == 2)
      for (const char* n : {"j1", "j2", "j2_plus", "j2_minus", "g_from_parts", "g_direct", "cmp_plus1", "cmp_minus1",
                            "cmp_plus2", "cmp_minus2", "cmp_budget", "cmp_ratio"})
        h.push_back(n);
    CsvWriter w(os, h);
    for (const auto& rec : r.records) {
      std::vector<double> v{rec.t, rec.eps_h_half, rec.omega_drift_sum, rec.reference_distance, rec.in_band ? 1.0 : 0.0,
                            rec.edge_eps_mass};
      v.insert(v.end(), rec.localized_eps.begin(), rec.localized_eps.end());
      if (K == 2) {
        const auto& c = rec.comparison;
        v.insert(v.end(), {rec.j1, rec.j2, rec.j2_plus, rec.j2_minus, rec.g_from_parts, rec.g_direct, c.plus[0], c.minus[0],
                           c.plus[1], c.minus[1], c.budget, c.max_ratio});
      }
      w.row(v);
    }
  }
  {
    std::ofstream os(dir / "conserved.csv");
    CsvWriter w(os, {"t", "E", "M", "P"});
    for (const auto& rec : r.records) w.row({rec.t, rec.conserved.energy, rec.conserved.mass, rec.conserved.momentum});
  }
  std::ofstream os(dir / "summary.txt");
  write_summary(os, r);
}

}  // namespace hwlab
