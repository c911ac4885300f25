#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwlab/experiments.hpp"

namespace hwlab {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Flat 'key = value' text; '#' starts a comment, blank lines are skipped. Later keys win.
class KeyValues {
 public:
  static KeyValues parse(std::istream& is);
  static KeyValues read(const std::filesystem::path& path);

  // "key=value"
  void set_assignment(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;  // throws ConfigError naming a missing key
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  // Comma or whitespace separated numbers; an absent or empty value gives an empty list.
  std::vector<double> list(const std::string& key) const;

  void require(const std::vector<std::string>& keys) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Reads the experiment keys over the defaults; `p` is mandatory.
ExperimentConfig experiment_config(const KeyValues& kv);

// Canonical 'key=value;...' serialization of every experiment key, and its 64-bit FNV-1a hash.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Sort order for sweep rows: (alpha, sigma, p, omega1, omega2, seed, canonical text).
bool config_less(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace hwlab
