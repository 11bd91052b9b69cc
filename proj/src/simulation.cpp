#include "opa/simulation.hpp"

#include <limits>
#include <numeric>
#include <set>

#include "opa/cascade.hpp"
#include "opa/control.hpp"
#include "opa/evolution.hpp"

namespace opa {

Grid initial_grid(const SimConfig& config) {
  if (!config.grid_file.empty()) return load_grid_file(config.grid_file);
  return generate_synthetic(config.synthetic(), config.seed_synthesis);
}

SimulationResult run_simulation(const SimConfig& config) { return run_simulation(config, initial_grid(config)); }

SimulationResult run_simulation(const SimConfig& config, Grid grid) {
  config.validate();
  grid.validate();
  grid.restore_all_lines();

  const IntradayProfile profile =
      config.profile_file.empty() ? IntradayProfile::standard() : load_profile_file(config.profile_file);
  const EvolutionParams evo = config.evolution();
  evo.validate();

  RandomStream outages(config.seed_outages);
  RandomStream trials(config.seed_overload_trials);
  RandomStream burst_rng(config.seed_bursts);
  RandomStream recovery(config.seed_recovery);
  RandomStream daily(config.seed_daily_factor);

  Dispatcher dispatcher(config.dispatch());
  SimulationResult out;
  std::set<int> to_upgrade;
  PendingQueue queue;
  std::vector<double> scheduled, demand, limit;

  const bool per_step = config.initiating_outage_cadence == OutageCadence::PerStep;
  const double p0_step = per_step ? config.p0 / kStepsPerDay : config.p0;
  const double inf = std::numeric_limits<double>::infinity();

  for (int day = 0; day < config.days; ++day) {
    const double day_factor = advance_day(grid, evo, daily);
    out.line_upgrades += upgrade_lines(grid, to_upgrade, evo.mu);
    const double peak = scheduled_peak(grid, profile, day_factor);
    if (maybe_upgrade_generation(grid, peak, evo)) ++out.generation_upgrades;
    out.daily_peak_demand.push_back(peak);

    ControlPolicy policy{config.control, inf, inf, config.p4};
    if (config.control) {
      const auto th = calibrate_thresholds(peak, config.f1, config.f2);
      policy.pl1 = th.pl1;
      policy.pl2 = th.pl2;
    }
    const bool counted = day >= config.warmup_days;
    double day_stress = 0.0;

    for (int step = 0; step < kStepsPerDay; ++step) {
      scheduled_demand(grid, step, profile, day_factor, scheduled);
      const double total_pre = std::accumulate(scheduled.begin(), scheduled.end(), 0.0);
      generation_limit(grid, total_pre, config.gen_headroom, limit);

      auto sampled = sample_bursts(scheduled, day, step, config.p3, config.b, burst_rng);
      const int n_sampled = static_cast<int>(sampled.size());
      const auto applied = filter_bursts(std::move(sampled), total_pre, policy, queue);
      const auto recovered = recover_pending(queue, total_pre, policy, recovery);

      demand = scheduled;
      double burst_power = 0.0;
      for (const auto& e : applied) {
        demand[e.node] += e.power;
        burst_power += e.power;
      }
      for (const auto& e : recovered) {
        const double p =
            config.burst_storage == BurstStorage::Relative ? e.rel_amplitude * scheduled[e.node] : e.power;
        demand[e.node] += p;
        burst_power += p;
      }
      out.bursts.sampled += n_sampled;
      out.bursts.applied += static_cast<long>(applied.size());
      out.bursts.postponed += n_sampled - static_cast<long>(applied.size());
      out.bursts.recovered += static_cast<long>(recovered.size());
      if (counted) out.burst_power_by_step[static_cast<std::size_t>(step)] += burst_power;

      std::vector<int> initiating;
      if (per_step || step == 0) initiating = apply_initiating_outages(grid, p0_step, outages);
      const auto outcome = run_cascade(grid, demand, config.p1, trials, dispatcher, limit);
      day_stress += mean_fractional_overload(outcome);

      const int n_failed = static_cast<int>(initiating.size() + outcome.failed_lines.size());
      if (outcome.load_shed > 0.0 || n_failed > 0) {
        out.records.push_back({day, step, outcome.load_shed, outcome.total_demand, n_failed,
                               static_cast<int>(outcome.overloaded_lines.size()), outcome.is_blackout});
      }
      if (outcome.is_blackout) {
        to_upgrade.insert(initiating.begin(), initiating.end());
        to_upgrade.insert(outcome.failed_lines.begin(), outcome.failed_lines.end());
        to_upgrade.insert(outcome.overloaded_lines.begin(), outcome.overloaded_lines.end());
      }
      // Outaged lines are repaired before the next dispatch.
      grid.restore_all_lines();

      if (config.diagnostics) {
        out.diagnostics.push_back({day, step, total_pre, outcome.total_demand, static_cast<long>(queue.size()),
                                   n_sampled, static_cast<int>(applied.size()),
                                   n_sampled - static_cast<int>(applied.size()), static_cast<int>(recovered.size())});
      }
    }
    out.daily_stress.push_back(day_stress / kStepsPerDay);
  }

  out.bursts.pending = static_cast<long>(queue.size());
  const std::span<const double> post(out.daily_stress.data() + config.warmup_days,
                                     out.daily_stress.size() - static_cast<std::size_t>(config.warmup_days));
  RankFitOptions rank;
  rank.window_fraction = config.tail_fit_fraction;
  out.stats = compute_statistics(out.records, config.days, config.warmup_days, post, config.intraday_bin_minutes, rank);
  out.final_grid = std::move(grid);
  out.dispatch = dispatcher.stats();
  return out;
}

}  // namespace opa
