#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "opa/dispatch.hpp"
#include "opa/evolution.hpp"
#include "opa/grid.hpp"

namespace opa {

enum class OutageCadence : std::uint8_t { PerStep, PerDay };
enum class BurstStorage : std::uint8_t { Relative, Absolute };

/// Everything a run depends on. Keys in the config file are the field names.
struct SimConfig {
  // Grid: a file, or a synthetic grid when grid_file is empty.
  std::string grid_file;
  int grid_nodes = 100;
  int grid_generators = 15;
  int grid_lines = 154;
  double grid_mean_load = 100.0;
  double grid_initial_margin = 0.4;
  double grid_limit_factor = 1.25;
  double grid_min_limit_fraction = 0.1;

  int days = 2000;
  int warmup_days = 500;

  double p0 = 1.44e-6;  // per line per day
  double p1 = 0.01;
  double p3 = 0.00025;  // per node per step
  double p4 = 0.00125;  // per pending burst per step
  double lambda_bar = 1.00058;
  double mu = 1.07;
  double b = 0.0;

  bool control = false;
  double f1 = 0.85;
  double f2 = 0.75;

  double gamma = 0.05;
  double gen_cost = 1.0;
  double shed_penalty = 100.0;
  double margin_threshold = 0.2;
  double margin_target = 0.4;
  double gen_headroom = 0.25;

  std::string profile_file;  // empty: built-in two-peak profile
  OutageCadence initiating_outage_cadence = OutageCadence::PerStep;
  BurstStorage burst_storage = BurstStorage::Relative;

  std::uint64_t seed_outages = 1;
  std::uint64_t seed_overload_trials = 2;
  std::uint64_t seed_bursts = 3;
  std::uint64_t seed_recovery = 4;
  std::uint64_t seed_daily_factor = 5;
  std::uint64_t seed_synthesis = 6;

  int intraday_bin_minutes = 60;
  double tail_fit_fraction = 0.1;
  bool diagnostics = false;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  EvolutionParams evolution() const;
  DispatchSettings dispatch() const;
  SyntheticGridParams synthetic() const;

  /// Stream seeds replaced by derive_seed(seed, replica). The synthesis seed
  /// is kept so replicas share a grid.
  SimConfig for_replica(std::uint64_t replica) const;

  bool operator==(const SimConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text; '#' starts a comment. Unknown or repeated keys
/// are errors. Missing keys keep their defaults.
SimConfig parse_config(std::istream& in);
SimConfig load_config_file(const std::filesystem::path& path);

/// Writes every key; parse_config(write_config(c)) == c.
void write_config(const SimConfig& config, std::ostream& out);

/// Sets one key from its text value, as the parser does.
void set_config_value(SimConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const SimConfig& config, const std::string& key);
std::vector<std::string> config_keys();

const char* to_string(OutageCadence c);
const char* to_string(BurstStorage s);

}  // namespace opa
