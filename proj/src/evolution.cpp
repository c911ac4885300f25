#include "hwlab/evolution.hpp"

#include <chrono>
#include <cmath>

#include "hwlab/fft.hpp"

namespace hwlab {

namespace {

long double discrete_mass(const std::vector<cplx>& u) {
  long double m = 0.0L;
  for (const auto& v : u) m += static_cast<long double>(v.real()) * v.real() + static_cast<long double>(v.imag()) * v.imag();
  return m;
}

}  // namespace

SplitStepper::SplitStepper(const Grid& g, double dt, double p, bool dealias)
    : grid_(g), dt_(dt), p_(p), dealias_(dealias), phase_(g.size()) {
  if (!(p > 1.0)) throw std::invalid_argument("nonlinearity exponent must exceed 1");
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("time step must be finite and nonzero");
  const std::size_t n = g.size();
  const double cut = 2.0 / 3.0 * g.max_wavenumber();
  for (std::size_t m = 0; m < n; ++m) {
    const double xi = g.wavenumber(m);
    const double d = m == g.nyquist_index() ? 0.0 : std::abs(xi);
    phase_[m] = std::polar(1.0, -d * dt);
    if (dealias_ && std::abs(xi) > cut) phase_[m] = 0.0;
  }
}

void SplitStepper::nonlinear(std::vector<cplx>& u, double tau) const {
  if (p_ == 2.0) {
    for (auto& v : u) v *= std::polar(1.0, std::abs(v) * tau);
  } else {
    const double e = 0.5 * (p_ - 1.0);
    for (auto& v : u) v *= std::polar(1.0, std::pow(std::norm(v), e) * tau);
  }
}

void SplitStepper::linear(std::vector<cplx>& u) const {
  fft::forward(u);
  for (std::size_t m = 0; m < u.size(); ++m) u[m] *= phase_[m];
  fft::inverse(u);
}

void SplitStepper::advance(std::vector<cplx>& u, long long steps) const {
  if (steps <= 0) return;
  const long double m0 = discrete_mass(u);
  nonlinear(u, 0.5 * dt_);
  for (long long s = 0; s < steps; ++s) {
    linear(u);
    nonlinear(u, s + 1 < steps ? dt_ : 0.5 * dt_);
    // Both sub-flows conserve the discrete mass exactly; FFT and phase roundoff is biased
    // and would accumulate linearly in the step count, so the norm is restored.
    const long double m = discrete_mass(u);
    if (!dealias_ && m > 0.0L && m0 > 0.0L) {
      const double f = static_cast<double>(std::sqrt(m0 / m));
      if (std::isfinite(f))
        for (auto& v : u) v *= f;
    }
  }
}

Field step(const Field& u, double dt, double p) {
  SplitStepper st(u.grid, dt, p);
  Field out = u;
  st.advance(out.values, 1);
  if (!all_finite(out)) throw NumericalError("non-finite values after one step", u, 0.0);
  return out;
}

Trajectory evolve(const Field& u0, double T, double dt, double p, const EvolveOptions& opts, const Monitor& monitor) {
  if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto total = static_cast<long long>(std::llround(T / dt));
  if (total < 1 || std::abs(total * dt - T) > 1e-9 * T) throw std::invalid_argument("time step must divide the final time");
  long long per = total;
  if (opts.stride > 0.0) {
    per = std::llround(opts.stride / dt);
    if (per < 1 || std::abs(per * dt - opts.stride) > 1e-9 * opts.stride)
      throw std::invalid_argument("time step must divide the stride");
  }

  const SplitStepper stepper(u0.grid, dt, p, opts.dealias);
  Trajectory traj;
  traj.dt = dt;
  traj.p = p;
  traj.stride = per * dt;

  const auto start = std::chrono::steady_clock::now();
  Field u = u0;
  auto record = [&](long long steps_done) {
    const double t = steps_done * dt;
    const auto q = conserved_quantities(u, p);
    traj.times.push_back(t);
    traj.conserved.push_back(q);
    if (opts.keep_snapshots) traj.snapshots.push_back(u);
    if (monitor) monitor(t, u, q);
  };

  record(0);
  long long done = 0;
  while (done < total) {
    const long long chunk = std::min(per, total - done);
    Field before = u;
    stepper.advance(u.values, chunk);
    done += chunk;
    if (!all_finite(u)) throw NumericalError("non-finite values during evolution", std::move(before), (done - chunk) * dt);
    if (chunk == per) record(done);
    if (opts.wall_budget > 0.0) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (elapsed > opts.wall_budget && done < total) throw BudgetExceeded("wall-clock budget exceeded");
    }
  }
  return traj;
}

ConservationReport conservation_report(const Trajectory& traj) {
  if (traj.conserved.empty()) throw std::invalid_argument("empty trajectory");
  const auto& q0 = traj.conserved.front();
  auto drift = [](double x, double x0) {
    const double d = std::abs(x - x0);
    return std::abs(x0) < 1e-12 ? d : d / std::abs(x0);
  };
  ConservationReport r;
  for (const auto& q : traj.conserved) {
    r.energy_drift = std::max(r.energy_drift, drift(q.energy, q0.energy));
    r.mass_drift = std::max(r.mass_drift, drift(q.mass, q0.mass));
    r.momentum_drift = std::max(r.momentum_drift, drift(q.momentum, q0.momentum));
  }
  return r;
}

}  // namespace hwlab
