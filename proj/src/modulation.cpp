#include "hwlab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hwlab/spectral.hpp"

namespace hwlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::size_t max_cached_profiles = 256;

std::vector<cplx> spectrum_without_nyquist(const RealField& f) {
  auto c = to_spectrum(f);
  c[f.grid.nyquist_index()] = 0.0;
  return c;
}

Field shifted(const Grid& g, const std::vector<cplx>& c, double x0, cplx phase) {
  std::vector<cplx> d(c.size());
  for (std::size_t m = 0; m < c.size(); ++m) d[m] = c[m] * std::polar(1.0, -g.wavenumber(m) * x0) * phase;
  return from_spectrum(g, std::move(d));
}

double periodic_distance(double a, double b, double L) { return std::remainder(a - b, L); }

}  // namespace

double japanese_bracket(double v) { return std::sqrt(1.0 + v * v); }

ProfileFamily::ProfileFamily(const Grid& g, double p, double solve_tol) : grid_(g), p_(p), tol_(solve_tol) {}

const ProfileFamily::Entry& ProfileFamily::at(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("profile requested at non-positive omega");
  if (auto it = cache_.find(omega); it != cache_.end()) return it->second;

  SolverOptions opts;
  opts.tol = tol_;
  opts.model = DomainModel::periodic;
  if (!cache_.empty()) {
    auto hi = cache_.lower_bound(omega);
    auto near = hi;
    if (hi == cache_.end() || (hi != cache_.begin() && std::abs(std::prev(hi)->first - omega) < std::abs(hi->first - omega)))
      near = std::prev(hi);
    opts.initial = std::pow(omega / near->first, 1.0 / (p_ - 1.0)) * near->second.state.profile;
  }
  Entry e;
  e.state = solve_ground_state(omega, p_, grid_, opts);
  const RealField& q = e.state.profile;
  const RealField dq = derivative(q);
  RealField s(grid_);
  // scaling identity d/dw Q_w = Q/((p-1)w) + x Q'/w; exact on the line, used for Jacobians
  for (std::size_t j = 0; j < grid_.size(); ++j) s[j] = (q[j] / (p_ - 1.0) + grid_.point(j) * dq[j]) / omega;
  e.q_hat = spectrum_without_nyquist(q);
  e.s_hat = spectrum_without_nyquist(s);
  const std::size_t n = grid_.size();
  e.dq_hat.resize(n);
  e.d2q_hat.resize(n);
  e.ds_hat.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx ik(0.0, grid_.wavenumber(m));
    e.dq_hat[m] = ik * e.q_hat[m];
    e.d2q_hat[m] = ik * ik * e.q_hat[m];
    e.ds_hat[m] = ik * e.s_hat[m];
  }
  if (cache_.size() >= max_cached_profiles) {
    auto far = std::max_element(cache_.begin(), cache_.end(), [omega](const auto& a, const auto& b) {
      return std::abs(a.first - omega) < std::abs(b.first - omega);
    });
    cache_.erase(far);
  }
  return cache_.emplace(omega, std::move(e)).first->second;
}

WaveFields wave_fields(ProfileFamily& family, const Wave& w, bool with_jacobian_terms) {
  const auto& e = family.at(w.omega);
  const Grid& g = family.grid();
  const cplx ph = std::polar(1.0, w.gamma);
  WaveFields f{Field(g), Field(g), Field(g), Field(g), Field(g)};
  f.r = shifted(g, e.q_hat, w.x, ph);
  f.dr = shifted(g, e.dq_hat, w.x, ph);
  if (with_jacobian_terms) {
    f.d2r = shifted(g, e.d2q_hat, w.x, ph);
    f.s = shifted(g, e.s_hat, w.x, ph);
    f.ds = shifted(g, e.ds_hat, w.x, ph);
  }
  return f;
}

Field wave_sum(ProfileFamily& family, const WaveParams& params) {
  Field sum(family.grid());
  for (const auto& w : params.waves) sum = sum + wave_fields(family, w, false).r;
  return sum;
}

WaveParams initial_guess(const Field& u, std::size_t K, ProfileFamily& family, const PeakOptions& opts) {
  if (K != 1 && K != 2) throw std::invalid_argument("decomposition supports one or two waves");
  const Grid& g = u.grid;
  const std::size_t n = g.size();
  const double top = max_abs(u);
  if (!(top > 0.0)) throw DecompositionError(DecompositionError::Kind::no_peaks, "field has no peaks");
  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(u[j]), l = std::abs(u[(j + n - 1) % n]), r = std::abs(u[(j + 1) % n]);
    if (a > l && a >= r && a >= opts.relative_height * top) peaks.push_back(j);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return std::abs(u[a]) > std::abs(u[b]); });
  std::vector<std::size_t> chosen;
  for (std::size_t j : peaks) {
    bool far = true;
    for (std::size_t c : chosen)
      if (std::abs(periodic_distance(g.point(j), g.point(c), g.length())) < opts.min_separation) far = false;
    if (far) chosen.push_back(j);
    if (chosen.size() == K) break;
  }
  if (chosen.size() < K)
    throw DecompositionError(DecompositionError::Kind::no_peaks, "fewer than " + std::to_string(K) + " separated peaks");
  const auto& unit = family.at(1.0).state.profile;
  const double q0 = unit[g.size() / 2];
  WaveParams params;
  for (std::size_t j : chosen)
    params.waves.push_back({std::pow(std::abs(u[j]) / q0, family.p() - 1.0), g.point(j), std::arg(u[j])});
  std::sort(params.waves.begin(), params.waves.end(), [](const Wave& a, const Wave& b) { return a.x < b.x; });
  return params;
}

namespace {

struct Evaluation {
  std::vector<WaveFields> fields;
  Field eps;
  Eigen::VectorXd eta;
  Eigen::VectorXd scale;  // ||Psi_i|| ||u||
};

Evaluation evaluate(const Field& u, const WaveParams& params, ProfileFamily& family, bool jacobian_terms) {
  Evaluation ev{{}, u, {}, {}};
  for (const auto& w : params.waves) {
    ev.fields.push_back(wave_fields(family, w, jacobian_terms));
    ev.eps = ev.eps - ev.fields.back().r;
  }
  const auto K = static_cast<Eigen::Index>(params.waves.size());
  ev.eta.resize(3 * K);
  ev.scale.resize(3 * K);
  const double un = std::max(l2_norm(u), 1e-300);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& f = ev.fields[static_cast<std::size_t>(k)];
    const Field ir = cplx(0.0, 1.0) * f.r;
    ev.eta(3 * k) = inner(f.r, ev.eps);
    ev.eta(3 * k + 1) = inner(f.dr, ev.eps);
    ev.eta(3 * k + 2) = inner(ir, ev.eps);
    const double nr = l2_norm(f.r), nd = l2_norm(f.dr);
    ev.scale(3 * k) = nr * un;
    ev.scale(3 * k + 1) = nd * un;
    ev.scale(3 * k + 2) = nr * un;
  }
  return ev;
}

Eigen::MatrixXd jacobian(const Evaluation& ev) {
  const std::size_t K = ev.fields.size();
  const cplx I(0.0, 1.0);
  Eigen::MatrixXd J(3 * K, 3 * K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& f = ev.fields[k];
    const Field psi[3] = {f.r, f.dr, I * f.r};
    // d Psi_j / d(w, x, gamma)
    const Field dpsi[3][3] = {{f.s, -1.0 * f.dr, I * f.r},
                              {f.ds, -1.0 * f.d2r, I * f.dr},
                              {I * f.s, -I * f.dr, -1.0 * f.r}};
    for (std::size_t m = 0; m < K; ++m) {
      const auto& g = ev.fields[m];
      const Field dr[3] = {g.s, -1.0 * g.dr, I * g.r};
      for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 3; ++c) {
          double v = -inner(psi[j], dr[c]);
          if (m == k) v += inner(dpsi[j][c], ev.eps);
          J(3 * k + j, 3 * m + c) = v;
        }
    }
  }
  return J;
}

double normalized_max(const Evaluation& ev) { return ev.eta.cwiseQuotient(ev.scale).cwiseAbs().maxCoeff(); }
double normalized_norm(const Evaluation& ev) { return ev.eta.cwiseQuotient(ev.scale).norm(); }

WaveParams apply_step(const WaveParams& p, const Eigen::VectorXd& d, double lambda) {
  WaveParams out = p;
  for (std::size_t k = 0; k < out.waves.size(); ++k) {
    out.waves[k].omega += lambda * d(3 * k);
    out.waves[k].x += lambda * d(3 * k + 1);
    out.waves[k].gamma += lambda * d(3 * k + 2);
  }
  return out;
}

bool admissible(const WaveParams& p) {
  for (const auto& w : p.waves)
    if (!(w.omega > 0.0) || !std::isfinite(w.x) || !std::isfinite(w.gamma)) return false;
  return true;
}

}  // namespace

Eigen::VectorXd constraint_residuals(const Field& u, const WaveParams& params, ProfileFamily& family) {
  return evaluate(u, params, family, false).eta;
}

Eigen::MatrixXd constraint_jacobian(const Field& u, const WaveParams& params, ProfileFamily& family) {
  return jacobian(evaluate(u, params, family, true));
}

Decomposition decompose(const Field& u, const WaveParams& guess, ProfileFamily& family, const NewtonOptions& opts) {
  if (!(u.grid == family.grid())) throw std::invalid_argument("field and profile family use different grids");
  if (guess.waves.empty()) throw std::invalid_argument("guess holds no waves");
  if (!admissible(guess)) throw DecompositionError(DecompositionError::Kind::invalid, "guess has non-positive omega");
  WaveParams params = guess;
  Evaluation ev = evaluate(u, params, family, true);
  for (int it = 0;; ++it) {
    if (normalized_max(ev) <= opts.tol) {
      Decomposition d(u.grid);
      d.params = params;
      d.eps = ev.eps;
      d.eps_l2 = l2_norm(ev.eps);
      d.eps_h_half = sobolev_norm(ev.eps, 0.5);
      d.orthogonality_residual = normalized_max(ev);
      d.residuals.assign(ev.eta.data(), ev.eta.data() + ev.eta.size());
      d.iterations = it;
      return d;
    }
    if (it >= opts.max_iter)
      throw DecompositionError(DecompositionError::Kind::divergence, "Newton iteration did not converge");
    const Eigen::MatrixXd J = jacobian(ev);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > opts.singular_threshold * sv(0)))
      throw DecompositionError(DecompositionError::Kind::singular, "decomposition Jacobian is near-singular");
    const Eigen::VectorXd step = svd.solve(-ev.eta);
    const double current = normalized_norm(ev);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      const WaveParams trial = apply_step(params, step, lambda);
      if (!admissible(trial)) continue;
      Evaluation next = evaluate(u, trial, family, true);
      if (normalized_norm(next) < current) {
        params = trial;
        ev = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw DecompositionError(DecompositionError::Kind::divergence, "Newton step failed to reduce the residual");
  }
}

Tracker::Tracker(ProfileFamily& family, std::size_t K, const NewtonOptions& opts) : family_(family), K_(K), opts_(opts) {}

bool Tracker::update(double t, const Field& u) {
  WaveParams predicted;
  try {
    if (last_) {
      predicted = *last_;
      for (auto& w : predicted.waves) w.gamma += w.omega * (t - last_t_);
    } else {
      predicted = initial_guess(u, K_, family_);
    }
    Decomposition d = decompose(u, predicted, family_, opts_);
    for (std::size_t k = 0; k < d.params.waves.size(); ++k) {
      auto& g = d.params.waves[k].gamma;
      g = predicted.waves[k].gamma + std::remainder(g - predicted.waves[k].gamma, two_pi);
    }
    SeriesRow row;
    row.t = t;
    row.waves = d.params.waves;
    row.eps_l2 = d.eps_l2;
    row.eps_h_half = d.eps_h_half;
    row.orthogonality_residual = d.orthogonality_residual;
    const Grid& g = u.grid;
    for (const auto& w : d.params.waves) {
      double acc = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double y = periodic_distance(g.point(j), w.x, g.length());
        acc += std::norm(d.eps[j]) / (1.0 + y * y);
      }
      row.weighted_eps_mass.push_back(acc * g.dx());
    }
    if (observer_) observer_(u, d, row);
    series_.rows.push_back(std::move(row));
    last_ = d.params;
    last_t_ = t;
    return true;
  } catch (const DecompositionError& e) {
    if (series_.rows.empty()) throw;
    series_.complete = false;
    series_.exit_time = t;
    series_.exit_reason = e.what();
    return false;
  }
}

ParameterSeries track(const Trajectory& traj, ProfileFamily& family, std::size_t K, const NewtonOptions& opts,
                      std::optional<WaveParams> seed) {
  if (traj.snapshots.empty()) throw std::invalid_argument("trajectory holds no snapshots");
  Tracker tracker(family, K, opts);
  if (seed) tracker.seed(*seed);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    if (!tracker.update(traj.times[i], traj.snapshots[i])) break;
  return tracker.series();
}

ModulationRateReport modulation_rates(const ParameterSeries& series, double sigma) {
  const auto& rows = series.rows;
  if (rows.size() < 3) throw std::invalid_argument("rate report needs at least three strides");
  const std::size_t N = rows.size(), K = rows.front().waves.size();
  auto diff = [&](std::size_t i, auto&& get) {
    if (i == 0) {
      const double h0 = rows[1].t - rows[0].t, h1 = rows[2].t - rows[1].t;
      return (-(2 * h0 + h1) / (h0 * (h0 + h1))) * get(rows[0]) + ((h0 + h1) / (h0 * h1)) * get(rows[1]) -
             (h0 / (h1 * (h0 + h1))) * get(rows[2]);
    }
    if (i == N - 1) {
      const double h0 = rows[N - 2].t - rows[N - 3].t, h1 = rows[N - 1].t - rows[N - 2].t;
      return (h1 / (h0 * (h0 + h1))) * get(rows[N - 3]) - ((h0 + h1) / (h0 * h1)) * get(rows[N - 2]) +
             ((2 * h1 + h0) / (h1 * (h0 + h1))) * get(rows[N - 1]);
    }
    const double h0 = rows[i].t - rows[i - 1].t, h1 = rows[i + 1].t - rows[i].t;
    return (-h1 / (h0 * (h0 + h1))) * get(rows[i - 1]) + ((h1 - h0) / (h0 * h1)) * get(rows[i]) +
           (h0 / (h1 * (h0 + h1))) * get(rows[i + 1]);
  };
  const double floor_term = 1.0 / (1.0 + sigma * sigma);
  ModulationRateReport rep;
  for (std::size_t i = 0; i < N; ++i) {
    rep.times.push_back(rows[i].t);
    std::vector<double> l(K), r(K), q(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double dw = diff(i, [k](const SeriesRow& s) { return s.waves[k].omega; });
      const double dx = diff(i, [k](const SeriesRow& s) { return s.waves[k].x; });
      const double dg = diff(i, [k](const SeriesRow& s) { return s.waves[k].gamma; });
      const double drift = dg - rows[i].waves[k].omega;
      l[k] = std::abs(dw) + dx * dx + drift * drift;
      r[k] = (k < rows[i].weighted_eps_mass.size() ? rows[i].weighted_eps_mass[k] : 0.0) + floor_term;
      q[k] = l[k] / r[k];
      rep.max_lhs = std::max(rep.max_lhs, l[k]);
      rep.max_ratio = std::max(rep.max_ratio, q[k]);
    }
    rep.lhs.push_back(std::move(l));
    rep.rhs.push_back(std::move(r));
    rep.ratio.push_back(std::move(q));
  }
  return rep;
}

}  // namespace hwlab
