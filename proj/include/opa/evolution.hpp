#pragma once

#include <set>
#include <span>

#include "opa/grid.hpp"
#include "opa/rng.hpp"

namespace opa {

struct EvolutionParams {
  double lambda_bar = 1.00058;     // daily demand growth factor
  double mu = 1.07;                // line upgrade factor after a blackout
  double margin_threshold = 0.2;   // critical generation margin
  double margin_target = 0.4;      // margin restored by a generation upgrade
  double daily_variability = 0.05; // half-width of the day factor

  /// Throws std::invalid_argument naming the bad field.
  void validate() const;
};

/// Multiplies every base load by lambda_bar and draws the day factor uniform
/// in [1 - gamma, 1 + gamma]. Always consumes exactly one draw.
double advance_day(std::span<double> demand_base, const EvolutionParams& params, RandomStream& rng);

/// Same, growing the grid's node base loads in place.
double advance_day(Grid& grid, const EvolutionParams& params, RandomStream& rng);

/// Restores and multiplies the limit of every listed line by mu, then clears
/// the set. Returns the number of lines upgraded. Throws GridError on an
/// unknown id (leaving the grid untouched).
int upgrade_lines(Grid& grid, std::set<int>& failed_or_overloaded, double mu);

/// C_M = (P_G - P_D) / P_D.
double generation_margin(double total_capacity, double demand);

/// If the margin against `peak_demand` is at or below margin_threshold,
/// rescales every generator so the margin becomes margin_target.
bool maybe_upgrade_generation(Grid& grid, double peak_demand, const EvolutionParams& params);

}  // namespace opa
