#include "opa/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>

#include "opa/format.hpp"
#include "opa/rng.hpp"

namespace opa {

const char* to_string(OutageCadence c) { return c == OutageCadence::PerStep ? "per_step" : "per_day"; }
const char* to_string(BurstStorage s) { return s == BurstStorage::Relative ? "relative" : "absolute"; }

namespace {

struct Field {
  const char* key;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("key '" + std::string(key) + "': expected " + expected + ", got '" + std::string(value) + "'");
}

Field make(const char* key, double SimConfig::*m) {
  return {key,
          [key, m](SimConfig& c, std::string_view v) {
            auto x = parse_double(v);
            if (!x) bad_value(key, v, "a number");
            c.*m = *x;
          },
          [m](const SimConfig& c) { return format_double(c.*m); }};
}

Field make(const char* key, int SimConfig::*m) {
  return {key,
          [key, m](SimConfig& c, std::string_view v) {
            auto x = parse_int<int>(v);
            if (!x) bad_value(key, v, "an integer");
            c.*m = *x;
          },
          [m](const SimConfig& c) { return std::to_string(c.*m); }};
}

Field make(const char* key, std::uint64_t SimConfig::*m) {
  return {key,
          [key, m](SimConfig& c, std::string_view v) {
            auto x = parse_int<std::uint64_t>(v);
            if (!x) bad_value(key, v, "an unsigned integer");
            c.*m = *x;
          },
          [m](const SimConfig& c) { return std::to_string(c.*m); }};
}

Field make(const char* key, bool SimConfig::*m) {
  return {key,
          [key, m](SimConfig& c, std::string_view v) {
            if (v == "true" || v == "on" || v == "1")
              c.*m = true;
            else if (v == "false" || v == "off" || v == "0")
              c.*m = false;
            else
              bad_value(key, v, "true or false");
          },
          [m](const SimConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field make(const char* key, std::string SimConfig::*m) {
  return {key, [m](SimConfig& c, std::string_view v) { c.*m = std::string(v); },
          [m](const SimConfig& c) { return c.*m; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(make("grid_file", &SimConfig::grid_file));
    f.push_back(make("grid_nodes", &SimConfig::grid_nodes));
    f.push_back(make("grid_generators", &SimConfig::grid_generators));
    f.push_back(make("grid_lines", &SimConfig::grid_lines));
    f.push_back(make("grid_mean_load", &SimConfig::grid_mean_load));
    f.push_back(make("grid_initial_margin", &SimConfig::grid_initial_margin));
    f.push_back(make("grid_limit_factor", &SimConfig::grid_limit_factor));
    f.push_back(make("grid_min_limit_fraction", &SimConfig::grid_min_limit_fraction));
    f.push_back(make("days", &SimConfig::days));
    f.push_back(make("warmup_days", &SimConfig::warmup_days));
    f.push_back(make("p0", &SimConfig::p0));
    f.push_back(make("p1", &SimConfig::p1));
    f.push_back(make("p3", &SimConfig::p3));
    f.push_back(make("p4", &SimConfig::p4));
    f.push_back(make("lambda_bar", &SimConfig::lambda_bar));
    f.push_back(make("mu", &SimConfig::mu));
    f.push_back(make("b", &SimConfig::b));
    f.push_back(make("control", &SimConfig::control));
    f.push_back(make("f1", &SimConfig::f1));
    f.push_back(make("f2", &SimConfig::f2));
    f.push_back(make("gamma", &SimConfig::gamma));
    f.push_back(make("gen_cost", &SimConfig::gen_cost));
    f.push_back(make("shed_penalty", &SimConfig::shed_penalty));
    f.push_back(make("margin_threshold", &SimConfig::margin_threshold));
    f.push_back(make("margin_target", &SimConfig::margin_target));
    f.push_back(make("gen_headroom", &SimConfig::gen_headroom));
    f.push_back(make("profile_file", &SimConfig::profile_file));
    f.push_back({"initiating_outage_cadence",
                 [](SimConfig& c, std::string_view v) {
                   if (v == "per_step")
                     c.initiating_outage_cadence = OutageCadence::PerStep;
                   else if (v == "per_day")
                     c.initiating_outage_cadence = OutageCadence::PerDay;
                   else
                     bad_value("initiating_outage_cadence", v, "per_step or per_day");
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.initiating_outage_cadence)); }});
    f.push_back({"burst_storage",
                 [](SimConfig& c, std::string_view v) {
                   if (v == "relative")
                     c.burst_storage = BurstStorage::Relative;
                   else if (v == "absolute")
                     c.burst_storage = BurstStorage::Absolute;
                   else
                     bad_value("burst_storage", v, "relative or absolute");
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.burst_storage)); }});
    f.push_back(make("seed_outages", &SimConfig::seed_outages));
    f.push_back(make("seed_overload_trials", &SimConfig::seed_overload_trials));
    f.push_back(make("seed_bursts", &SimConfig::seed_bursts));
    f.push_back(make("seed_recovery", &SimConfig::seed_recovery));
    f.push_back(make("seed_daily_factor", &SimConfig::seed_daily_factor));
    f.push_back(make("seed_synthesis", &SimConfig::seed_synthesis));
    f.push_back(make("intraday_bin_minutes", &SimConfig::intraday_bin_minutes));
    f.push_back(make("tail_fit_fraction", &SimConfig::tail_fit_fraction));
    f.push_back(make("diagnostics", &SimConfig::diagnostics));
    return f;
  }();
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

void set_config_value(SimConfig& config, const std::string& key, const std::string& value) {
  find_field(key).set(config, trim(value));
}

std::string get_config_value(const SimConfig& config, const std::string& key) { return find_field(key).get(config); }

void SimConfig::validate() const {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string("key '") + key + "': " + what);
  };
  auto prob = [&](double p, const char* key) { require(p >= 0.0 && p <= 1.0, key, "must be a probability in [0, 1]"); };
  prob(p0, "p0");
  prob(p1, "p1");
  prob(p3, "p3");
  prob(p4, "p4");
  require(days > 0, "days", "must be positive");
  require(warmup_days >= 0 && warmup_days < days, "warmup_days", "must satisfy 0 <= warmup_days < days");
  require(lambda_bar >= 1.0, "lambda_bar", "must be >= 1");
  require(mu > 1.0, "mu", "must be > 1");
  require(b >= 0.0 && std::isfinite(b), "b", "must be >= 0");
  require(f2 > 0.0 && f2 <= f1 && f1 <= 1.0, "f1", "fractions need 0 < f2 <= f1 <= 1");
  require(gamma >= 0.0 && gamma < 1.0, "gamma", "must be in [0, 1)");
  require(gen_cost >= 0.0, "gen_cost", "must be >= 0");
  require(shed_penalty > gen_cost, "shed_penalty", "must exceed gen_cost");
  require(margin_threshold > 0.0, "margin_threshold", "must be > 0");
  require(margin_target > margin_threshold, "margin_target", "must exceed margin_threshold");
  require(gen_headroom >= 0.0, "gen_headroom", "must be >= 0");
  require(intraday_bin_minutes > 0 && 1440 % intraday_bin_minutes == 0 && intraday_bin_minutes % 5 == 0,
          "intraday_bin_minutes", "must divide 1440 and be a multiple of 5");
  require(tail_fit_fraction > 0.0 && tail_fit_fraction <= 1.0, "tail_fit_fraction", "must be in (0, 1]");
  if (grid_file.empty()) {
    require(grid_nodes >= 2, "grid_nodes", "must be >= 2");
    require(grid_generators >= 1 && grid_generators <= grid_nodes, "grid_generators", "must be in [1, grid_nodes]");
    require(grid_lines >= grid_nodes - 1, "grid_lines", "must be >= grid_nodes - 1");
    require(grid_mean_load > 0.0, "grid_mean_load", "must be > 0");
    require(grid_initial_margin >= 0.0, "grid_initial_margin", "must be >= 0");
    require(grid_limit_factor > 0.0, "grid_limit_factor", "must be > 0");
    require(grid_min_limit_fraction > 0.0, "grid_min_limit_fraction", "must be > 0");
  }
}

EvolutionParams SimConfig::evolution() const {
  return {lambda_bar, mu, margin_threshold, margin_target, gamma};
}

DispatchSettings SimConfig::dispatch() const { return {gen_cost, shed_penalty}; }

SyntheticGridParams SimConfig::synthetic() const {
  SyntheticGridParams p;
  p.nodes = grid_nodes;
  p.generators = grid_generators;
  p.lines = grid_lines;
  p.mean_load = grid_mean_load;
  p.initial_margin = grid_initial_margin;
  p.limit_factor = grid_limit_factor;
  p.min_limit_fraction = grid_min_limit_fraction;
  return p;
}

SimConfig SimConfig::for_replica(std::uint64_t replica) const {
  SimConfig c = *this;
  for (auto* s : {&c.seed_outages, &c.seed_overload_trials, &c.seed_bursts, &c.seed_recovery, &c.seed_daily_factor})
    *s = derive_seed(*s, replica);
  return c;
}

SimConfig parse_config(std::istream& in) {
  SimConfig c;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    auto where = [&] { return "config line " + std::to_string(line_no) + ": "; };
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected 'key = value'");
    const std::string key(trim(t.substr(0, eq)));
    std::string_view value = t.substr(eq + 1);
    if (const auto hash = value.find('#'); hash != std::string_view::npos) value = value.substr(0, hash);
    value = trim(value);
    if (!seen.insert(key).second) throw ConfigError(where() + "key '" + key + "' given twice");
    try {
      find_field(key).set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  c.validate();
  return c;
}

SimConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_config(const SimConfig& config, std::ostream& out) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

}  // namespace opa
