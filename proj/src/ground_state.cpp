#include "hwlab/ground_state.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "hwlab/spectral.hpp"

namespace hwlab {

namespace {

constexpr double pi = std::numbers::pi;

RealField power_of(const RealField& q, double p, bool dealias) {
  if (dealias) return dealiased_power(q, p);
  RealField out(q.grid);
  for (std::size_t j = 0; j < q.size(); ++j) out[j] = std::pow(std::abs(q[j]), p - 1.0) * q[j];
  return out;
}

// (D + w)^{-1} on the periodic box
RealField resolvent(const RealField& f, double omega) {
  auto c = to_spectrum(f);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double d = m == f.grid.nyquist_index() ? 0.0 : std::abs(f.grid.wavenumber(m));
    c[m] /= d + omega;
  }
  return real_part(from_spectrum(f.grid, std::move(c)));
}

RealField shifted_operator(const RealField& f, double omega) {
  return fractional_derivative(f, 1.0) + omega * f;
}

void symmetrize(RealField& f) {
  const std::size_t n = f.size();
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double v = 0.5 * (f[j] + f[n - j]);
    f[j] = v;
    f[n - j] = v;
  }
}

// w(x) = 1/(1+y^2), y = omega x, and (D + omega) w in closed form:
// D w = omega (1 - y^2)/(1 + y^2)^2 from the transform (pi/omega) e^{-|xi|/omega}.
struct TailBasis {
  RealField w;
  RealField lw;
};

TailBasis tail_basis(const Grid& g, double omega) {
  TailBasis b{RealField(g), RealField(g)};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = omega * g.point(j);
    const double d = 1.0 + y * y;
    b.w[j] = 1.0 / d;
    b.lw[j] = omega * (1.0 - y * y) / (d * d) + omega / d;
  }
  return b;
}

// 2 \int_{Y}^\infty (1+y^2)^{-q} dy
double tail_integral(double Y, double q) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  return 2.0 * gauss_kronrod<double, 31>::integrate([q](double y) { return std::pow(1.0 + y * y, -q); }, Y, inf, 15, 1e-14);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void check_parameters(double omega, double p, const Grid& g) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(p > 1.0 && p < 3.0)) throw std::invalid_argument("p must lie in (1, 3)");
  // the profile spectrum decays like e^{-|xi|/omega}; demand e^{-12} at the grid cutoff
  if (g.max_wavenumber() / omega < 12.0) throw std::invalid_argument("grid does not resolve width 1/omega");
  if (g.length() * omega < 20.0) throw std::invalid_argument("box too small for width 1/omega");
}

GroundState finish(GroundState q) {
  try {
    q.decay_exponent = fit_decay(q).exponent;
  } catch (const std::exception&) {
    q.decay_exponent = std::nan("");
  }
  return q;
}

GroundState solve_periodic(double omega, double p, const Grid& g, const SolverOptions& opts) {
  const double gamma = p / (p - 1.0);
  RealField q = opts.initial ? *opts.initial : sample(g, [omega](double x) { return 2.0 * omega / (1.0 + omega * omega * x * x); });
  if (!(q.grid == g)) throw std::invalid_argument("initial guess lives on a different grid");
  for (int it = 0; it <= opts.max_iter; ++it) {
    const RealField nl = power_of(q, p, opts.dealias);
    const RealField lq = shifted_operator(q, omega);
    const double res = l2_norm(lq - nl);
    if (res <= opts.tol) {
      GroundState out;
      out.omega = omega;
      out.p = p;
      out.model = DomainModel::periodic;
      out.remainder = q;
      out.profile = std::move(q);
      out.residual = res;
      out.iterations = it;
      return finish(std::move(out));
    }
    const double num = inner(lq, q), den = inner(nl, q);
    if (!(den > 0.0) || !std::isfinite(num / den) || max_abs(q) < 1e-12)
      throw ConvergenceError("ground-state iteration collapsed to zero");
    q = std::pow(num / den, gamma) * resolvent(nl, omega);
    symmetrize(q);
  }
  throw ConvergenceError("ground-state iteration did not converge in " + std::to_string(opts.max_iter) + " steps");
}

GroundState solve_whole_line(double omega, double p, const Grid& g, const SolverOptions& opts) {
  const double gamma = p / (p - 1.0);
  const TailBasis basis = tail_basis(g, omega);
  const double Y = 0.5 * g.length() * omega;
  const double tail_np = tail_integral(Y, p) / omega;  // \int_{|x|>L/2} w^p
  double a = 2.0 * omega;
  RealField r(g);
  if (opts.initial) {
    if (!(opts.initial->grid == g)) throw std::invalid_argument("initial guess lives on a different grid");
    // keep the analytic tail, absorb the rest into r
    a = (*opts.initial)[0] / basis.w[0];
    r = *opts.initial - a * basis.w;
  }
  for (int it = 0; it <= opts.max_iter; ++it) {
    const RealField q = a * basis.w + r;
    const RealField nl = power_of(q, p, opts.dealias);
    const RealField lq = a * basis.lw + shifted_operator(r, omega);
    const double res = l2_norm(lq - nl);
    if (res <= opts.tol) {
      GroundState out;
      out.omega = omega;
      out.p = p;
      out.model = DomainModel::whole_line;
      out.profile = q;
      out.remainder = r;
      out.tail_amplitude = a;
      out.residual = res;
      out.iterations = it;
      return finish(std::move(out));
    }
    const double num = inner(lq, q), den = inner(nl, q);
    if (!(den > 0.0) || !std::isfinite(num / den) || max_abs(q) < 1e-12)
      throw ConvergenceError("ground-state iteration collapsed to zero");
    // amplitude of the x^-2 tail: line integral of Q^p over pi (\int (D+w) w = pi)
    const double b = (integrate(nl) + std::pow(a, p) * tail_np) / pi;
    const RealField rnew = resolvent(nl - b * basis.lw, omega);
    const double m = std::pow(num / den, gamma);
    a = m * b;
    r = m * rnew;
    symmetrize(r);
  }
  throw ConvergenceError("ground-state iteration did not converge in " + std::to_string(opts.max_iter) + " steps");
}

}  // namespace

double GroundState::mass() const {
  double m = inner(profile, profile);
  if (model == DomainModel::whole_line) m += tail_amplitude * tail_amplitude * tail_integral(0.5 * grid().length() * omega, 2.0) / omega;
  return m;
}

GroundState solve_ground_state(double omega, double p, const Grid& g, const SolverOptions& opts) {
  check_parameters(omega, p, g);
  return opts.model == DomainModel::periodic ? solve_periodic(omega, p, g, opts) : solve_whole_line(omega, p, g, opts);
}

RealField elliptic_operator(const GroundState& q) {
  if (q.model == DomainModel::periodic) return shifted_operator(q.profile, q.omega);
  const TailBasis basis = tail_basis(q.grid(), q.omega);
  return q.tail_amplitude * basis.lw + shifted_operator(q.remainder, q.omega);
}

double elliptic_residual(const GroundState& q) {
  RealField nl(q.grid());
  for (std::size_t j = 0; j < nl.size(); ++j) nl[j] = std::pow(std::abs(q.profile[j]), q.p - 1.0) * q.profile[j];
  return l2_norm(elliptic_operator(q) - nl);
}

GroundState rescale_ground_state(const GroundState& q, double omega, double tol) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const double lambda = omega / q.omega;
  if (lambda == 1.0) return q;
  if (q.model != DomainModel::whole_line) throw std::invalid_argument("rescaling needs a whole_line ground state");
  const Grid& g = q.grid();
  check_parameters(omega, q.p, g);
  const double amp = std::pow(lambda, 1.0 / (q.p - 1.0));
  std::vector<double> pts;
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = lambda * g.point(j);
    if (y >= g.point(0) && y <= -g.point(0)) {
      pts.push_back(y);
      idx.push_back(j);
    }
  }
  const auto rv = interpolate(q.remainder, pts);
  GroundState out;
  out.omega = omega;
  out.p = q.p;
  out.model = DomainModel::whole_line;
  out.tail_amplitude = amp * q.tail_amplitude;
  out.remainder = RealField(g);
  for (std::size_t i = 0; i < idx.size(); ++i) out.remainder[idx[i]] = amp * rv[i];
  symmetrize(out.remainder);
  const TailBasis basis = tail_basis(g, omega);
  out.profile = out.tail_amplitude * basis.w + out.remainder;
  out.residual = elliptic_residual(out);
  (void)tol;
  return finish(std::move(out));
}

MassLaw mass_of_omega(double p, std::span<const double> omegas, const Grid& g, std::optional<SolverOptions> opts) {
  if (omegas.size() < 2) throw std::invalid_argument("mass law needs at least two omegas");
  SolverOptions o = opts ? *opts : SolverOptions{};
  if (!opts) o.model = DomainModel::whole_line;
  MassLaw law;
  std::vector<double> lx, ly;
  for (double w : omegas) {
    const double m = solve_ground_state(w, p, g, o).mass();
    law.samples.emplace_back(w, m);
    lx.push_back(std::log(w));
    ly.push_back(std::log(m));
  }
  law.slope = least_squares_slope(lx, ly);
  return law;
}

RealField omega_derivative_profile(double omega, double p, const Grid& g, double h, const SolverOptions& opts) {
  if (h <= 0.0) h = 1e-3 * omega;
  if (h >= omega) throw std::invalid_argument("finite-difference step must be smaller than omega");
  const auto hi = solve_ground_state(omega + h, p, g, opts);
  const auto lo = solve_ground_state(omega - h, p, g, opts);
  return (0.5 / h) * (hi.profile - lo.profile);
}

DecayFit fit_decay(const RealField& f, double lo, double hi, double tolerance) {
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = f.grid.point(j);
    if (x < lo || x > hi) continue;
    if (!(f[j] > 0.0)) throw std::domain_error("decay window contains non-positive samples");
    lx.push_back(std::log(x));
    ly.push_back(std::log(f[j]));
  }
  if (lx.size() < 2) throw std::invalid_argument("decay window holds fewer than two samples");
  DecayFit fit;
  fit.exponent = least_squares_slope(lx, ly);
  fit.matches = std::abs(fit.exponent + 2.0) <= tolerance;
  return fit;
}

DecayFit fit_decay(const GroundState& q) {
  const double L = q.grid().length();
  return fit_decay(q.profile, L / 8.0, L / 4.0);
}

}  // namespace hwlab
