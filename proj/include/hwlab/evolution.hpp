#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "hwlab/field.hpp"
#include "hwlab/spectral.hpp"

namespace hwlab {

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, Field last_good, double t)
      : std::runtime_error(what), snapshot(std::move(last_good)), time(t) {}
  Field snapshot;  // last finite state
  double time;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strang splitting for i u_t - D u + |u|^{p-1} u = 0:
// half nonlinear phase u e^{i|u|^{p-1} dt/2}, full linear step e^{-i|xi| dt}, half nonlinear.
class SplitStepper {
 public:
  SplitStepper(const Grid& g, double dt, double p, bool dealias = false);

  // Advances `steps` steps; consecutive half nonlinear phases are merged (|u| is invariant
  // under the nonlinear flow, so the merge is exact). After every step the discrete L2 norm
  // is reset to its value at the start of the call (long double sums): the scheme conserves
  // it exactly, and this removes the biased floating-point drift. Not applied with dealias.
  void advance(std::vector<cplx>& u, long long steps) const;

  double dt() const { return dt_; }

 private:
  void nonlinear(std::vector<cplx>& u, double tau) const;
  void linear(std::vector<cplx>& u) const;

  Grid grid_;
  double dt_;
  double p_;
  bool dealias_;
  std::vector<cplx> phase_;
};

// One step; dt may be negative (time reversal). Throws NumericalError on non-finite output.
Field step(const Field& u, double dt, double p);

struct EvolveOptions {
  double stride = 0.0;        // sampling interval; 0 means only t = 0 and t = T
  double wall_budget = 0.0;   // seconds; 0 disables the check
  bool keep_snapshots = true;
  bool dealias = false;       // 2/3-rule filter after each step
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<ConservedTriple> conserved;
  double dt = 0.0;
  double p = 0.0;
  double stride = 0.0;
};

using Monitor = std::function<void(double t, const Field& u, const ConservedTriple& q)>;

// Samples at t = k*stride for k = 0..floor(T/stride); the flow still runs to T.
// stride must be a whole number of steps.
Trajectory evolve(const Field& u0, double T, double dt, double p, const EvolveOptions& opts = {},
                  const Monitor& monitor = {});

struct ConservationReport {
  // max over samples of |X(t) - X(0)| / |X(0)|; absolute when |X(0)| is below 1e-12
  double energy_drift = 0.0;
  double mass_drift = 0.0;
  double momentum_drift = 0.0;
};

ConservationReport conservation_report(const Trajectory& traj);

}  // namespace hwlab
