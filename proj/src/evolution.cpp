#include "opa/evolution.hpp"

#include <stdexcept>
#include <string>

namespace opa {

void EvolutionParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(lambda_bar >= 1.0)) fail("lambda_bar must be >= 1");
  if (!(mu > 1.0)) fail("mu must be > 1");
  if (!(margin_threshold > 0.0)) fail("margin_threshold must be > 0");
  if (!(margin_target > margin_threshold)) fail("margin_target must exceed margin_threshold");
  if (!(daily_variability >= 0.0 && daily_variability < 1.0)) fail("gamma must be in [0, 1)");
}

double advance_day(std::span<double> demand_base, const EvolutionParams& params, RandomStream& rng) {
  for (double& d : demand_base) d *= params.lambda_bar;
  const double u = rng.uniform();
  if (params.daily_variability == 0.0) return 1.0;
  return 1.0 + params.daily_variability * (2.0 * u - 1.0);
}

double advance_day(Grid& grid, const EvolutionParams& params, RandomStream& rng) {
  for (auto& node : grid.nodes) node.base_load *= params.lambda_bar;
  std::span<double> none;
  return advance_day(none, params, rng);
}

int upgrade_lines(Grid& grid, std::set<int>& failed_or_overloaded, double mu) {
  if (!(mu > 1.0)) throw std::invalid_argument("mu must be > 1");
  for (int id : failed_or_overloaded)
    if (id < 0 || id >= static_cast<int>(grid.lines.size()))
      throw GridError("upgrade of unknown line " + std::to_string(id));
  for (int id : failed_or_overloaded) {
    auto& line = grid.lines[id];
    line.status = LineStatus::Up;
    line.flow_limit *= mu;
  }
  const int n = static_cast<int>(failed_or_overloaded.size());
  failed_or_overloaded.clear();
  return n;
}

double generation_margin(double total_capacity, double demand) { return (total_capacity - demand) / demand; }

bool maybe_upgrade_generation(Grid& grid, double peak_demand, const EvolutionParams& params) {
  if (!(peak_demand > 0.0)) throw std::invalid_argument("peak demand must be > 0");
  const double pg = grid.total_capacity();
  if (!(pg > 0.0)) throw GridError("grid has no generation capacity to upgrade");
  if (generation_margin(pg, peak_demand) > params.margin_threshold) return false;
  const double s = peak_demand * (1.0 + params.margin_target) / pg;
  for (auto& node : grid.nodes) node.gen_capacity *= s;
  return true;
}

}  // namespace opa
