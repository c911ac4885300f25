#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hwlab/cutoffs.hpp"
#include "hwlab/evolution.hpp"
#include "hwlab/modulation.hpp"

namespace hwlab {

enum class PerturbationKind { noise, shift, omega };

PerturbationKind parse_perturbation_kind(const std::string& s);
std::string to_string(PerturbationKind k);

struct ExperimentConfig {
  double p = 2.0;
  double omega1 = 0.9;
  double omega2 = 1.1;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double sigma = 40.0;
  double sigma_min = 20.0;
  double alpha = 1e-2;
  PerturbationKind perturbation_kind = PerturbationKind::noise;
  std::uint64_t seed = 1;
  std::size_t n = 4096;
  double L = 400.0;
  double dt = 1e-3;
  double T = 50.0;
  double stride = 0.5;
  double A0 = 10.0;
  double a_exponent = 0.5;  // localized weight tail exponent
  double R_weight = 10.0;   // localized weight radius
  double newton_tol = 1e-9;
  double wall_budget = 0.0;
};

// Perturbation of H^{1/2} norm alpha around the wave sum `truth`:
//   noise: Gaussian band-limited field (|xi| <= 2) under Gaussian envelopes of width 4 at
//          each wave, projected L2-orthogonally off the 3K constraint directions;
//   shift: sum_k R_k(x - 1) - R_k(x);
//   omega: sum_k R_k at omega_k (1 + 0.05) minus R_k.
Field build_perturbation(PerturbationKind kind, const WaveParams& truth, double alpha, std::uint64_t seed,
                         ProfileFamily& family);

struct InitialData {
  WaveParams params;  // the unperturbed waves
  Field u0;
  Field perturbation;
};

// One wave at x = 0 with omega1, gamma1.
InitialData build_single_wave_data(const ExperimentConfig& cfg, ProfileFamily& family);
// Two waves at -sigma/2 and +sigma/2.
InitialData build_two_wave_data(const ExperimentConfig& cfg, ProfileFamily& family);

// omega_ref \int |u|^2 cutoff, halved when `half`.
double localized_mass(const Field& u, double omega_ref, const RealField& cutoff, bool half);

// Comparison identities in mass units (the omega_k(0) factors divide out):
//   plus  = (J_k^+ - J_k)/omega_k(0) + 1/2 sum_{k'>=k} M(Q_{omega_k'(t)})
//   minus = (J_k - J_k^-)/omega_k(0) - 1/2 sum_{k'>=k} M(Q_{omega_k'(t)})
// with J = omega(0) \int|u|^2 Phi and J^{+-} = omega(0)/2 \int|u|^2 Phi^{+-}; Phi_1 = 1.
struct ComparisonDefects {
  double plus[2] = {0.0, 0.0};
  double minus[2] = {0.0, 0.0};
  double budget = 0.0;     // ||eps||_{H^1/2}^2 + <sigma>^-3
  double max_ratio = 0.0;  // max |defect| / budget
  bool flagged = false;    // max_ratio > 10
  bool degenerate = false; // u carries no mass
};

ComparisonDefects comparison_identities(const Field& u, const WaveParams& params, double eps_h_half, double t, double sigma,
                                        ProfileFamily& family);

struct MonotonicityReport {
  CutoffKind kind = CutoffKind::base;
  std::vector<double> times;
  std::vector<double> change;  // J(t) - J(0), J being J_2 or J_2^{+-} for the chosen kind
  double max_increase = 0.0;
  double max_decrease = 0.0;  // most negative change, reported as a positive number
  double sup_eps_l2_sq = 0.0;
  double c_emp = 0.0;         // sigma * max_increase / (sup ||eps||_2^2 + 1)
  bool capped = false;
};

// Cutoff re-anchored at the tracked positions at each sample.
MonotonicityReport monotonicity_from_positions(const Trajectory& traj, const std::vector<double>& x1,
                                               const std::vector<double>& x2, double omega_ref, double sup_eps_l2_sq,
                                               double sigma, CutoffKind kind);
MonotonicityReport monotonicity_report(const Trajectory& traj, const ParameterSeries& series, double sigma, CutoffKind kind);

struct StrideRecord {
  double t = 0.0;
  std::vector<Wave> waves;
  double eps_l2 = 0.0;
  double eps_h_half = 0.0;
  double orthogonality_residual = 0.0;
  double omega_drift_sum = 0.0;      // sum_k |omega_k(t) - omega_k(0)|
  double reference_distance = 0.0;   // ||u - sum Q_{omega_k(0)}(x - x_k(t)) e^{i gamma_k(t)}||_{H^1/2}
  bool in_band = true;
  std::vector<double> localized_eps;  // \int phi_R(x - x_k) |eps|^2
  double edge_eps_mass = 0.0;         // \int_{|x| >= 3L/8} |eps|^2
  double j1 = 0.0, j2 = 0.0, j2_plus = 0.0, j2_minus = 0.0;
  double g_from_parts = 0.0, g_direct = 0.0;
  ComparisonDefects comparison;
  ConservedTriple conserved;
};

struct StabilityReport {
  ExperimentConfig config;
  std::size_t wave_count = 0;
  double eps0_h_half = 0.0;
  double sup_eps_h_half = 0.0;
  double sup_eps_l2 = 0.0;
  double max_omega_drift = 0.0;       // max_{t,k} |omega_k(t) - omega_k(0)|
  double max_omega_drift_sum = 0.0;   // max_t sum_k
  double sup_reference_distance = 0.0;
  // first stride at which edge_eps_mass exceeds 1e-6 M(u(0)): beyond it the box seam matters
  std::optional<double> wrap_horizon;
  bool tracking_complete = true;
  std::optional<double> t_star;        // first band or decomposition exit
  std::string exit_reason = "none";
  double band_level = 0.0;             // alpha + 1/<sigma> (two waves) or max(alpha, sqrt(newton_tol)) (one wave)
  double min_A0 = 0.0;                 // sup ||eps||_{H^1/2} / band_level
  bool band_held = true;
  // single wave: max_t (||eps||^2_{H^1/2} + |dw|) / ||eps(0)||^2 and max_t |dw| / (||eps(t)||_2^2 + ||eps(0)||_2^2)
  double energy_law_constant = 0.0;
  double quadratic_law_constant = 0.0;
  // two waves
  MonotonicityReport monotonicity[3];  // base, plus, minus
  double comparison_max_ratio = 0.0;
  std::size_t comparison_flags = 0;
  double parameter_control_constant = 0.0;  // max_t sum|dw| / (sup_{<=t} ||eps||^2_{H^1/2} + 1/sigma)
  double g_bookkeeping_defect = 0.0;
  bool cutoff_capped = false;
  double composite_cutoff_slope = 0.0;  // max_t sup |d/dx Phi|; the profile itself has slope cutoff_slope(base)
  double rate_max_ratio = 0.0;
  ConservationReport conservation;
  ParameterSeries series;
  std::vector<StrideRecord> records;
};

StabilityReport run_single_wave_stability(const ExperimentConfig& cfg);
StabilityReport run_two_wave_stability(const ExperimentConfig& cfg);

// 0 when the run stayed in the band with the decomposition intact, 2 otherwise.
int exit_status(const StabilityReport& r);

// series.csv, strides.csv, conserved.csv and summary.txt in `dir`.
void write_report(const StabilityReport& r, const std::filesystem::path& dir);
void write_summary(std::ostream& os, const StabilityReport& r);

void validate(const ExperimentConfig& cfg, std::size_t waves);

}  // namespace hwlab
