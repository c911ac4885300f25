#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwlab/evolution.hpp"
#include "hwlab/field.hpp"
#include "hwlab/ground_state.hpp"

namespace hwlab {

struct Wave {
  double omega = 1.0;
  double x = 0.0;
  double gamma = 0.0;
};

struct WaveParams {
  std::vector<Wave> waves;
};

struct DecompositionError : std::runtime_error {
  enum class Kind { no_peaks, divergence, singular, invalid };
  DecompositionError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

// Periodic ground states on one grid, solved on demand and cached by omega. Each new omega
// is warm-started from the nearest cached profile, rescaled in amplitude. Not thread-safe;
// use one family per pipeline.
class ProfileFamily {
 public:
  // Centered profile data, spectra with the Nyquist mode removed.
  struct Entry {
    GroundState state;
    std::vector<cplx> q_hat, dq_hat, d2q_hat, s_hat, ds_hat;
  };

  ProfileFamily(const Grid& g, double p, double solve_tol = 1e-11);

  const Grid& grid() const { return grid_; }
  double p() const { return p_; }
  const Entry& at(double omega);
  std::size_t size() const { return cache_.size(); }

 private:
  Grid grid_;
  double p_;
  double tol_;
  std::map<double, Entry> cache_;
};

// Sample of R = Q_w(x - x0) e^{i gamma} and the directions the Newton solve needs.
struct WaveFields {
  Field r;      // R
  Field dr;     // d/dx R
  Field d2r;    // d2/dx2 R
  Field s;      // d/dw R
  Field ds;     // d/dx d/dw R
};

WaveFields wave_fields(ProfileFamily& family, const Wave& w, bool with_jacobian_terms = true);
Field wave_sum(ProfileFamily& family, const WaveParams& params);

struct Decomposition {
  WaveParams params;
  Field eps;
  double eps_l2 = 0.0;
  double eps_h_half = 0.0;
  // max_i |eta_i| / (||Psi_i||_2 ||u||_2) over the 3K constraints
  double orthogonality_residual = 0.0;
  std::vector<double> residuals;  // raw eta, ordered (Re R_k eps, Re dR_k eps, Im R_k eps) per wave
  int iterations = 0;

  explicit Decomposition(const Grid& g) : eps(g) {}
};

struct PeakOptions {
  double min_separation = 2.0;     // in x units
  double relative_height = 0.05;   // ignore maxima below this fraction of the highest
};

// Waves sorted by position.
WaveParams initial_guess(const Field& u, std::size_t K, ProfileFamily& family, const PeakOptions& opts = {});

struct NewtonOptions {
  double tol = 1e-9;
  int max_iter = 30;
  int max_halvings = 8;
  double singular_threshold = 1e-12;  // reciprocal condition number of the Jacobian
};

// Constraint residuals eta and their Jacobian at params (exposed for diagnostics and tests).
Eigen::VectorXd constraint_residuals(const Field& u, const WaveParams& params, ProfileFamily& family);
Eigen::MatrixXd constraint_jacobian(const Field& u, const WaveParams& params, ProfileFamily& family);

Decomposition decompose(const Field& u, const WaveParams& guess, ProfileFamily& family, const NewtonOptions& opts = {});

struct SeriesRow {
  double t = 0.0;
  std::vector<Wave> waves;
  double eps_l2 = 0.0;
  double eps_h_half = 0.0;
  double orthogonality_residual = 0.0;
  std::vector<double> weighted_eps_mass;  // \int |eps|^2 / (1 + (x - x_k)^2)
};

struct ParameterSeries {
  std::vector<SeriesRow> rows;
  bool complete = true;
  std::optional<double> exit_time;  // first stride where the decomposition failed
  std::string exit_reason;
};

// Warm-started decomposition along a sequence of fields. The phase is predicted by
// gamma + omega * dt and unwrapped to the branch nearest the prediction.
class Tracker {
 public:
  using Observer = std::function<void(const Field& u, const Decomposition& d, const SeriesRow& row)>;

  Tracker(ProfileFamily& family, std::size_t K, const NewtonOptions& opts = {});

  // Returns false (and records the exit) when the decomposition fails. The first call
  // seeds from initial_guess unless a seed was given.
  bool update(double t, const Field& u);
  void seed(const WaveParams& params) { last_ = params; }
  void set_observer(Observer obs) { observer_ = std::move(obs); }

  const ParameterSeries& series() const { return series_; }
  ParameterSeries& series() { return series_; }

 private:
  ProfileFamily& family_;
  std::size_t K_;
  NewtonOptions opts_;
  std::optional<WaveParams> last_;
  double last_t_ = 0.0;
  ParameterSeries series_;
  Observer observer_;
};

// Throws DecompositionError when the first stride fails; later failures truncate the series.
ParameterSeries track(const Trajectory& traj, ProfileFamily& family, std::size_t K, const NewtonOptions& opts = {},
                      std::optional<WaveParams> seed = {});

struct ModulationRateReport {
  std::vector<double> times;
  std::vector<std::vector<double>> lhs;    // [row][wave] |w'| + |x'|^2 + |gamma' - w|^2
  std::vector<std::vector<double>> rhs;    // [row][wave] weighted eps mass + <sigma>^-2
  std::vector<std::vector<double>> ratio;  // lhs / rhs
  double max_lhs = 0.0;
  double max_ratio = 0.0;
};

// Second-order finite differences (one-sided at the ends). Needs >= 3 rows.
ModulationRateReport modulation_rates(const ParameterSeries& series, double sigma);

double japanese_bracket(double v);  // (1 + v^2)^{1/2}

}  // namespace hwlab
