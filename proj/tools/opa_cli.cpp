#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opa/config.hpp"
#include "opa/format.hpp"
#include "opa/grid.hpp"
#include "opa/metrics.hpp"
#include "opa/report.hpp"
#include "opa/simulation.hpp"
#include "opa/sweep.hpp"

namespace fs = std::filesystem;

namespace {

// Reads the mean_overload column of a stress.tsv, keeping days >= warmup.
std::vector<double> read_stress(const fs::path& path, int warmup) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stress file " + path.string());
  std::vector<double> out;
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = opa::split_fields(line);
    if (f.empty()) continue;
    const auto day = f.size() == 2 ? opa::parse_int<int>(f[0]) : std::nullopt;
    const auto v = f.size() == 2 ? opa::parse_double(f[1]) : std::nullopt;
    if (!day || !v) throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) + ": malformed row");
    if (*day >= warmup) out.push_back(*v);
  }
  return out;
}

void print_summary(const opa::RunStatistics& s) { opa::write_summary(s, std::cout); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OPA blackout model with intraday demand, power bursts and demand control"};
  app.require_subcommand(1);

  std::string config_path, out_path, axis_spec, records_path, stress_path, start_grid;
  int replicas = 1;
  bool serial = false;

  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  simulate->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_path, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--config", config_path, "base config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis_spec, "axis, e.g. 'b=0,0.1,0.2;control=false,true'")->required();
  sweep->add_option("--replicas", replicas, "replicas per point")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "output directory")->required();
  sweep->add_option("--start-grid", start_grid, "grid every run starts from")->check(CLI::ExistingFile);
  sweep->add_flag("--serial", serial, "run one simulation at a time");

  opa::SyntheticGridParams gp;
  std::uint64_t seed = 6;
  auto* gen = app.add_subcommand("gen-grid", "write a synthetic grid");
  gen->add_option("--nodes", gp.nodes, "node count")->required();
  gen->add_option("--gens", gp.generators, "generator node count")->required();
  gen->add_option("--lines", gp.lines, "line count")->required();
  gen->add_option("--seed", seed, "synthesis seed");
  gen->add_option("--mean-load", gp.mean_load, "mean node load (MW)");
  gen->add_option("--margin", gp.initial_margin, "initial generation margin");
  gen->add_option("--limit-factor", gp.limit_factor, "flow limit over base flow");
  gen->add_option("--out", out_path, "grid file")->required();

  int days = -1, warmup = 0, bin = 60;
  double tail_fraction = 0.1;
  auto* stats = app.add_subcommand("stats", "statistics of a records file");
  stats->add_option("--records", records_path, "records file")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", out_path, "output directory")->required();
  stats->add_option("--days", days, "simulated days (default: last record day + 1)");
  stats->add_option("--warmup", warmup, "days excluded from statistics");
  stats->add_option("--bin", bin, "intraday bin width in minutes");
  stats->add_option("--tail-fraction", tail_fraction, "fraction of ranks in the tail fit");
  stats->add_option("--stress", stress_path, "stress.tsv of the same run")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto config = opa::load_config_file(config_path);
      const auto result = opa::run_simulation(config);
      opa::write_run(config, result, out_path);
      print_summary(result.stats);
    } else if (*sweep) {
      const auto base = opa::load_config_file(config_path);
      const auto axis = opa::parse_axis(axis_spec, base);
      std::optional<opa::Grid> start;
      if (!start_grid.empty()) start = opa::load_grid_file(start_grid);
      const auto result = serial ? opa::run_sweep_serial(axis, replicas, start) : opa::run_sweep(axis, replicas, start);
      opa::write_sweep_dir(result, out_path);
      opa::write_sweep(result, std::cout);
    } else if (*gen) {
      const auto grid = opa::generate_synthetic(gp, seed);
      opa::save_grid_file(grid, out_path);
      std::cout << "nodes " << grid.nodes.size() << " lines " << grid.lines.size() << '\n';
    } else if (*stats) {
      const auto records = opa::read_records_file(records_path);
      if (days < 0) {
        days = 0;
        for (const auto& r : records) days = std::max(days, r.day + 1);
      }
      if (days <= warmup) throw std::runtime_error("--days must exceed --warmup");
      std::vector<double> stress;
      if (!stress_path.empty()) stress = read_stress(stress_path, warmup);
      opa::RankFitOptions rank;
      rank.window_fraction = tail_fraction;
      const auto s = opa::compute_statistics(records, days, warmup, stress, bin, rank);
      opa::write_statistics(s, bin, out_path);
      print_summary(s);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
