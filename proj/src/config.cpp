#include "hwlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "hwlab/io.hpp"

namespace hwlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return out;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& is) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv.values_[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse(is);
}

void KeyValues::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
  values_[key] = trim(assignment.substr(eq + 1));
}

const std::string& KeyValues::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string KeyValues::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double KeyValues::number(const std::string& key) const { return parse_number(key, text(key)); }

double KeyValues::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

long long KeyValues::integer(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = text(key);
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return out;
}

std::vector<double> KeyValues::list(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  std::string v = text(key);
  for (auto& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) out.push_back(parse_number(key, tok));
  return out;
}

void KeyValues::require(const std::vector<std::string>& keys) const {
  for (const auto& k : keys)
    if (!has(k)) throw ConfigError("missing required key '" + k + "'");
}

ExperimentConfig experiment_config(const KeyValues& kv) {
  kv.require({"p"});
  ExperimentConfig c;
  c.p = kv.number("p");
  c.omega1 = kv.number("omega1", c.omega1);
  c.omega2 = kv.number("omega2", c.omega2);
  c.gamma1 = kv.number("gamma1", c.gamma1);
  c.gamma2 = kv.number("gamma2", c.gamma2);
  c.sigma = kv.number("sigma", c.sigma);
  c.sigma_min = kv.number("sigma_min", c.sigma_min);
  c.alpha = kv.number("alpha", c.alpha);
  c.perturbation_kind = parse_perturbation_kind(kv.text("perturbation_kind", to_string(c.perturbation_kind)));
  const long long seed = kv.integer("seed", static_cast<long long>(c.seed));
  if (seed < 0) throw ConfigError("key 'seed' must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  const long long n = kv.integer("n", static_cast<long long>(c.n));
  if (n <= 0) throw ConfigError("key 'n' must be positive");
  c.n = static_cast<std::size_t>(n);
  c.L = kv.number("L", c.L);
  c.dt = kv.number("dt", c.dt);
  c.T = kv.number("T", c.T);
  c.stride = kv.number("stride", c.stride);
  c.A0 = kv.number("A0", c.A0);
  c.a_exponent = kv.number("a_exponent", c.a_exponent);
  c.R_weight = kv.number("R_weight", c.R_weight);
  c.newton_tol = kv.number("newton_tol", c.newton_tol);
  c.wall_budget = kv.number("wall_budget", c.wall_budget);
  return c;
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream os;
  auto put = [&](const char* k, double v) { os << k << '=' << format_double(v) << ';'; };
  put("A0", c.A0);
  put("L", c.L);
  put("R_weight", c.R_weight);
  put("T", c.T);
  put("a_exponent", c.a_exponent);
  put("alpha", c.alpha);
  put("dt", c.dt);
  put("gamma1", c.gamma1);
  put("gamma2", c.gamma2);
  os << "n=" << c.n << ';';
  put("newton_tol", c.newton_tol);
  put("omega1", c.omega1);
  put("omega2", c.omega2);
  put("p", c.p);
  os << "perturbation_kind=" << to_string(c.perturbation_kind) << ';';
  os << "seed=" << c.seed << ';';
  put("sigma", c.sigma);
  put("sigma_min", c.sigma_min);
  put("stride", c.stride);
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

bool config_less(const ExperimentConfig& a, const ExperimentConfig& b) {
  return std::forward_as_tuple(a.alpha, a.sigma, a.p, a.omega1, a.omega2, a.seed) <
             std::forward_as_tuple(b.alpha, b.sigma, b.p, b.omega1, b.omega2, b.seed) ||
         (std::forward_as_tuple(a.alpha, a.sigma, a.p, a.omega1, a.omega2, a.seed) ==
              std::forward_as_tuple(b.alpha, b.sigma, b.p, b.omega1, b.omega2, b.seed) &&
          canonical_text(a) < canonical_text(b));
}

}  // namespace hwlab
