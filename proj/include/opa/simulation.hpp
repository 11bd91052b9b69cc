#pragma once

#include <array>
#include <vector>

#include "opa/config.hpp"
#include "opa/demand.hpp"
#include "opa/dispatch.hpp"
#include "opa/grid.hpp"
#include "opa/metrics.hpp"

namespace opa {

struct BurstCounts {
  long sampled = 0;
  long applied = 0;  // applied in the step they were sampled
  long postponed = 0;
  long recovered = 0;
  long pending = 0;  // still queued at the end of the run

  bool balanced() const { return sampled == applied + recovered + pending; }
};

struct StepDiagnostics {
  int day = 0;
  int step = 0;
  double scheduled_demand = 0.0;
  double total_demand = 0.0;
  long queue_length = 0;
  int sampled = 0;
  int applied = 0;
  int postponed = 0;
  int recovered = 0;
};

struct SimulationResult {
  std::vector<BlackoutRecord> records;
  std::vector<StepDiagnostics> diagnostics;  // only when config.diagnostics
  std::vector<double> daily_stress;          // mean network overload per day
  std::vector<double> daily_peak_demand;     // scheduled peak per day
  BurstCounts bursts;
  /// Burst power added to demand, summed by step of day, post-warmup.
  std::array<double, kStepsPerDay> burst_power_by_step{};
  RunStatistics stats;
  Grid final_grid;
  long line_upgrades = 0;
  long generation_upgrades = 0;
  DispatcherStats dispatch;
};

/// The grid named by the config: loaded from grid_file or synthesized.
Grid initial_grid(const SimConfig& config);

/// Runs the day/step loop from the config's grid.
SimulationResult run_simulation(const SimConfig& config);

/// Runs the day/step loop from `grid` (e.g. a previously warmed-up state).
SimulationResult run_simulation(const SimConfig& config, Grid grid);

}  // namespace opa
