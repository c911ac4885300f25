// Command-line front end: hwlab <subcommand> [--config FILE] [--set key=value]... [--out DIR]

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "hwlab/config.hpp"
#include "hwlab/experiments.hpp"
#include "hwlab/ground_state.hpp"
#include "hwlab/io.hpp"
#include "hwlab/linearized.hpp"
#include "hwlab/oracles.hpp"
#include "hwlab/spectral.hpp"

namespace fs = std::filesystem;
using namespace hwlab;

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out = "out";
};

KeyValues load(const Invocation& inv) {
  KeyValues kv = inv.config_path.empty() ? KeyValues{} : KeyValues::read(inv.config_path);
  for (const auto& o : inv.overrides) kv.set_assignment(o);
  return kv;
}

// Writes the summary to stdout and to <out>/summary.txt.
void emit_summary(const fs::path& out, const std::string& text) {
  std::cout << text;
  std::ofstream os(out / "summary.txt");
  os << text;
}

DomainModel parse_model(const std::string& s) {
  if (s == "periodic") return DomainModel::periodic;
  if (s == "whole_line") return DomainModel::whole_line;
  throw ConfigError("key 'model': expected periodic or whole_line, got '" + s + "'");
}

std::size_t grid_size(const KeyValues& kv, long long fallback) {
  const long long n = kv.integer("n", fallback);
  if (n <= 0) throw ConfigError("key 'n' must be positive");
  return static_cast<std::size_t>(n);
}

int cmd_ground_state(const KeyValues& kv, const fs::path& out) {
  kv.require({"p"});
  const double p = kv.number("p");
  const double omega = kv.number("omega", 1.0);
  const Grid g(grid_size(kv, 8192), kv.number("L", 400.0));
  SolverOptions opts;
  opts.model = parse_model(kv.text("model", "whole_line"));
  opts.tol = kv.number("tol", opts.tol);
  opts.max_iter = static_cast<int>(kv.integer("max_iter", opts.max_iter));
  const GroundState q = solve_ground_state(omega, p, g, opts);
  fs::create_directories(out);
  const Metadata meta{{"omega", format_double(omega)},
                      {"p", format_double(p)},
                      {"model", kv.text("model", "whole_line")},
                      {"residual", format_double(q.residual)},
                      {"iterations", std::to_string(q.iterations)},
                      {"decay_exponent", format_double(q.decay_exponent)},
                      {"mass", format_double(q.mass())}};
  write_field(out / "profile.txt", q.profile, meta);
  std::ostringstream s;
  SummaryWriter(s)
      .put("omega", omega)
      .put("p", p)
      .put("residual", q.residual)
      .put("iterations", static_cast<long long>(q.iterations))
      .put("decay_exponent", q.decay_exponent)
      .put("mass", q.mass());
  emit_summary(out, s.str());
  return 0;
}

int cmd_spectrum(const KeyValues& kv, const fs::path& out) {
  kv.require({"p"});
  const double p = kv.number("p");
  const double omega = kv.number("omega", 1.0);
  const Grid g(grid_size(kv, 1024), kv.number("L", 200.0));
  SolverOptions opts;
  opts.tol = kv.number("tol", 1e-11);
  const GroundState q = solve_ground_state(omega, p, g, opts);
  const ConstraintSet none{};
  const ConstraintSet minus_set{{q.profile}};
  const ConstraintSet plus_set{{q.profile, derivative(q.profile)}};
  fs::create_directories(out);
  std::ofstream os(out / "spectrum.csv");
  CsvWriter csv(os, {"branch", "norm", "constraints", "min_eigenvalue"});
  std::ostringstream s;
  SummaryWriter sum(s);
  sum.put("p", p).put("omega", omega);
  for (NormKind norm : {NormKind::l2, NormKind::h_half}) {
    const std::string nn = norm == NormKind::l2 ? "l2" : "h_half";
    for (Branch b : {Branch::minus, Branch::plus}) {
      const std::string bn = b == Branch::minus ? "minus" : "plus";
      const double con = constrained_min_eigenvalue(b, q, b == Branch::minus ? minus_set : plus_set, norm);
      const double unc = constrained_min_eigenvalue(b, q, none, norm);
      csv.row_text({bn, nn, b == Branch::minus ? "Q" : "Q;Q'", format_double(con)});
      csv.row_text({bn, nn, "none", format_double(unc)});
      sum.put("lambda_" + bn + "_" + nn, con).put("unconstrained_" + bn + "_" + nn, unc);
    }
  }
  emit_summary(out, s.str());
  return 0;
}

int cmd_identities(const KeyValues& kv, const fs::path& out) {
  fs::create_directories(out);
  std::ostringstream s;
  SummaryWriter sum(s);

  const Grid cg(grid_size(kv, 1024), kv.number("L", 200.0));
  const long long count = kv.integer("count", 100);
  if (count < 0) throw ConfigError("key 'count' must be non-negative");
  const auto seed = static_cast<std::uint64_t>(kv.integer("seed", 1));
  const CommutatorCorpus corpus = commutator_corpus(cg, static_cast<std::size_t>(count), seed);
  {
    std::ofstream os(out / "commutator.csv");
    CsvWriter csv(os, {"index", "ratio"});
    for (std::size_t i = 0; i < corpus.ratios.size(); ++i) csv.row({static_cast<double>(i), corpus.ratios[i]});
  }
  sum.put("commutator_pairs", count).put("commutator_seed", static_cast<long long>(seed)).put("commutator_max_ratio", corpus.max_ratio);

  const Grid og(static_cast<std::size_t>(kv.integer("oracle_n", 4096)), kv.number("oracle_L", 80.0));
  const RealField gauss = sample(og, [](double x) { return std::exp(-x * x); });
  double worst = 0.0;
  {
    std::ofstream os(out / "d_oracle.csv");
    CsvWriter csv(os, {"s", "x", "spectral", "quadrature", "difference"});
    for (double sv : {0.25, 0.5, 0.75}) {
      const RealField a = fractional_derivative(gauss, 2.0 * sv);
      const RealField b = fractional_derivative_integral(gauss, sv);
      double local = 0.0;
      for (std::size_t j = 0; j < og.size(); ++j) {
        local = std::max(local, std::abs(a[j] - b[j]));
        csv.row({sv, og.point(j), a[j], b[j], a[j] - b[j]});
      }
      if (sv == 0.5) worst = local;
      sum.put("oracle_max_difference_s" + format_double(sv), local);
    }
  }
  sum.put("oracle_max_difference", worst);
  {
    std::ofstream os(out / "normalization.csv");
    CsvWriter csv(os, {"s", "quadrature", "closed_form"});
    for (double sv : {0.25, 0.5, 0.75}) {
      const double closed = sv * std::pow(4.0, sv) * std::tgamma(0.5 + sv) / (std::sqrt(M_PI) * std::tgamma(1.0 - sv));
      csv.row({sv, normalization_constant(sv), closed});
    }
  }
  sum.put("normalization_half_error", std::abs(normalization_constant(0.5) - 1.0 / M_PI));
  emit_summary(out, s.str());
  return 0;
}

std::string padded(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return buf;
}

int cmd_evolve(const KeyValues& kv, const fs::path& out) {
  ExperimentConfig cfg = experiment_config(kv);
  const long long waves = kv.integer("waves", 1);
  if (waves != 1 && waves != 2) throw ConfigError("key 'waves' must be 1 or 2");
  validate(cfg, static_cast<std::size_t>(waves));
  const Grid g(cfg.n, cfg.L);
  ProfileFamily family(g, cfg.p);
  const InitialData data = waves == 1 ? build_single_wave_data(cfg, family) : build_two_wave_data(cfg, family);
  EvolveOptions eo;
  eo.stride = cfg.stride;
  eo.wall_budget = cfg.wall_budget;
  const bool snapshots = kv.integer("snapshots", 1) != 0;
  eo.keep_snapshots = false;
  fs::create_directories(out);
  if (snapshots) fs::create_directories(out / "snapshots");
  std::ofstream cs(out / "conserved.csv");
  CsvWriter csv(cs, {"t", "E", "M", "P"});
  std::size_t index = 0;
  const Trajectory traj = evolve(data.u0, cfg.T, cfg.dt, cfg.p, eo, [&](double t, const Field& u, const ConservedTriple& q) {
    csv.row({t, q.energy, q.mass, q.momentum});
    if (snapshots) write_field(out / "snapshots" / ("snapshot_" + padded(index) + ".txt"), u, {{"t", format_double(t)}});
    ++index;
  });
  const ConservationReport rep = conservation_report(traj);
  std::ostringstream s;
  SummaryWriter(s)
      .put("samples", static_cast<long long>(index))
      .put("energy_drift", rep.energy_drift)
      .put("mass_drift", rep.mass_drift)
      .put("momentum_drift", rep.momentum_drift);
  emit_summary(out, s.str());
  return 0;
}

int cmd_decompose(const KeyValues& kv, const fs::path& out) {
  kv.require({"p", "input"});
  const double p = kv.number("p");
  const long long K = kv.integer("waves", 2);
  if (K != 1 && K != 2) throw ConfigError("key 'waves' must be 1 or 2");
  const FieldFile in = read_field(kv.text("input"));
  ProfileFamily family(in.field.grid, p);
  NewtonOptions nopts;
  nopts.tol = kv.number("newton_tol", nopts.tol);
  const WaveParams guess = initial_guess(in.field, static_cast<std::size_t>(K), family);
  const Decomposition d = decompose(in.field, guess, family, nopts);
  fs::create_directories(out);
  write_field(out / "eps.txt", d.eps);
  std::ofstream os(out / "params.csv");
  CsvWriter csv(os, {"k", "omega", "x", "gamma"});
  std::ostringstream s;
  SummaryWriter sum(s);
  for (std::size_t k = 0; k < d.params.waves.size(); ++k) {
    const Wave& w = d.params.waves[k];
    csv.row({static_cast<double>(k + 1), w.omega, w.x, w.gamma});
    const std::string idx = std::to_string(k + 1);
    sum.put("omega" + idx, w.omega).put("x" + idx, w.x).put("gamma" + idx, w.gamma);
  }
  sum.put("eps_l2", d.eps_l2)
      .put("eps_h_half", d.eps_h_half)
      .put("orthogonality_residual", d.orthogonality_residual)
      .put("iterations", static_cast<long long>(d.iterations));
  emit_summary(out, s.str());
  return 0;
}

int cmd_stability(const KeyValues& kv, const fs::path& out, std::size_t waves) {
  const ExperimentConfig cfg = experiment_config(kv);
  const StabilityReport r = waves == 1 ? run_single_wave_stability(cfg) : run_two_wave_stability(cfg);
  write_report(r, out);
  write_summary(std::cout, r);
  return exit_status(r);
}

std::string cell(double v) { return format_double(v); }

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int cmd_sweep(const KeyValues& kv, const fs::path& out) {
  const std::string mode = kv.text("mode", "stability-two");
  if (mode != "stability-two" && mode != "stability-single") throw ConfigError("key 'mode': expected stability-two or stability-single");
  const std::size_t waves = mode == "stability-two" ? 2 : 1;
  const ExperimentConfig base = experiment_config(kv);
  const std::vector<double> alphas = kv.has("sweep_alpha") ? kv.list("sweep_alpha") : std::vector<double>{base.alpha};
  const std::vector<double> sigmas = kv.has("sweep_sigma") ? kv.list("sweep_sigma") : std::vector<double>{base.sigma};

  std::vector<ExperimentConfig> grid;
  for (double a : alphas)
    for (double sg : sigmas) {
      ExperimentConfig c = base;
      c.alpha = a;
      c.sigma = sg;
      grid.push_back(c);
    }
  std::sort(grid.begin(), grid.end(), config_less);

  fs::create_directories(out);
  struct Row {
    ExperimentConfig cfg;
    std::optional<StabilityReport> rep;
    std::string status;
  };
  // runs share no mutable state; workers pull configs in key order and fill their own row
  std::vector<Row> rows;
  for (const auto& c : grid) rows.push_back(Row{c, std::nullopt, "completed"});
  const long long jobs_key = kv.integer("jobs", std::max(1u, std::thread::hardware_concurrency()));
  if (jobs_key <= 0) throw ConfigError("key 'jobs' must be positive");
  const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(jobs_key), std::max<std::size_t>(rows.size(), 1));
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Row& row = rows[i];
      char hash[32];
      std::snprintf(hash, sizeof hash, "run_%016llx", static_cast<unsigned long long>(config_hash(row.cfg)));
      try {
        row.rep = waves == 1 ? run_single_wave_stability(row.cfg) : run_two_wave_stability(row.cfg);
        write_report(*row.rep, out / hash);
        if (row.rep->t_star) row.status = "exit: " + row.rep->exit_reason;
      } catch (const std::exception& e) {
        row.rep.reset();
        row.status = std::string("error: ") + e.what();
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cerr << hash << " alpha=" << cell(row.cfg.alpha) << " sigma=" << cell(row.cfg.sigma) << " " << row.status << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  {
    std::ofstream os(out / "sweep.csv");
    CsvWriter csv(os, {"alpha", "sigma", "p", "sup_eps", "min_A0", "max_omega_drift", "t_star", "status"});
    for (const auto& r : rows) {
      const bool ok = r.rep.has_value();
      csv.row_text({cell(r.cfg.alpha), cell(r.cfg.sigma), cell(r.cfg.p), ok ? cell(r.rep->sup_eps_h_half) : "nan",
                    ok ? cell(r.rep->min_A0) : "nan", ok ? cell(r.rep->max_omega_drift) : "nan",
                    ok && r.rep->t_star ? cell(*r.rep->t_star) : "none", sanitize(r.status)});
    }
  }

  // sup_eps should grow with alpha at fixed sigma and shrink as sigma grows at fixed alpha.
  long long violations = 0;
  for (const auto& a : rows)
    for (const auto& b : rows) {
      if (!a.rep || !b.rep) continue;
      const bool alpha_pair = a.cfg.sigma == b.cfg.sigma && a.cfg.alpha < b.cfg.alpha;
      const bool sigma_pair = a.cfg.alpha == b.cfg.alpha && a.cfg.sigma > b.cfg.sigma;
      if ((alpha_pair || sigma_pair) && a.rep->sup_eps_h_half > b.rep->sup_eps_h_half) ++violations;
    }
  std::ostringstream s;
  long long failed = 0;
  for (const auto& r : rows) failed += r.rep ? 0 : 1;
  SummaryWriter(s)
      .put("mode", mode)
      .put("runs", static_cast<long long>(rows.size()))
      .put("hard_errors", failed)
      .put("monotone", violations == 0)
      .put("monotonicity_violations", violations);
  emit_summary(out, s.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the half-wave equation i u_t - D u + |u|^{p-1} u = 0"};
  app.require_subcommand(1);
  Invocation inv;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"ground-state", "solve for the ground state Q_omega and write its profile"},
      {"spectrum", "constrained and unconstrained minima of L+ and L-"},
      {"identities", "commutator corpus, integral-representation table, C(s)"},
      {"evolve", "split-step evolution of one or two waves; conserved.csv and snapshots"},
      {"decompose", "modulation decomposition of a field file (key 'input')"},
      {"stability-single", "single-wave stability run"},
      {"stability-two", "two-wave stability run"},
      {"sweep", "alpha x sigma grid of stability runs (keys sweep_alpha, sweep_sigma, mode)"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->add_option("-c,--config", inv.config_path, "flat key = value config file");
    sc->add_option("-s,--set", inv.overrides, "override key=value (repeatable)");
    sc->add_option("-o,--out", inv.out, "output directory")->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const KeyValues kv = load(inv);
    const fs::path out = inv.out;
    if (name == "ground-state") return cmd_ground_state(kv, out);
    if (name == "spectrum") return cmd_spectrum(kv, out);
    if (name == "identities") return cmd_identities(kv, out);
    if (name == "evolve") return cmd_evolve(kv, out);
    if (name == "decompose") return cmd_decompose(kv, out);
    if (name == "stability-single") return cmd_stability(kv, out, 1);
    if (name == "stability-two") return cmd_stability(kv, out, 2);
    if (name == "sweep") return cmd_sweep(kv, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: unknown subcommand '" << name << "'\n";
  return 1;
}
