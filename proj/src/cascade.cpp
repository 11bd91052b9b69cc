#include "opa/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opa {

bool is_blackout(double load_shed, double total_demand) {
  if (!(total_demand > 0.0)) return false;
  return load_shed / total_demand > kBlackoutThreshold;
}

bool is_overloaded(const Line& line, double flow) {
  return line.is_up() && std::abs(flow) >= line.flow_limit * (1.0 - kOverloadTolerance);
}

std::vector<int> apply_initiating_outages(Grid& grid, double p0_step, RandomStream& rng) {
  if (!(p0_step >= 0.0 && p0_step <= 1.0)) throw std::invalid_argument("p0_step must be in [0, 1]");
  std::vector<int> out;
  for (auto& line : grid.lines) {
    if (!line.is_up()) continue;
    if (rng.bernoulli(p0_step)) {
      line.status = LineStatus::Down;
      line.flow = 0.0;
      out.push_back(line.id);
    }
  }
  return out;
}

CascadeOutcome run_cascade(Grid& grid, std::span<const double> demand, double p1, RandomStream& rng,
                           Dispatcher& dispatcher, std::span<const double> gen_limit) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 must be in [0, 1]");
  CascadeOutcome out;
  out.total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
  std::vector<char> overloaded(grid.lines.size(), 0);

  DispatchResult res;
  std::vector<int> failing;
  while (true) {
    res = dispatcher.solve(grid, demand, gen_limit);
    ++out.redispatch_count;
    // Trial every overloaded line against this dispatch before outaging any.
    failing.clear();
    for (auto& line : grid.lines) {
      line.flow = res.flows[line.id];
      if (!is_overloaded(line, line.flow)) continue;
      overloaded[line.id] = 1;
      if (rng.bernoulli(p1)) failing.push_back(line.id);
    }
    if (failing.empty()) break;
    for (int id : failing) {
      grid.lines[id].status = LineStatus::Down;
      grid.lines[id].flow = 0.0;
      out.failed_lines.push_back(id);
    }
  }
  std::sort(out.failed_lines.begin(), out.failed_lines.end());
  for (std::size_t l = 0; l < overloaded.size(); ++l)
    if (overloaded[l]) out.overloaded_lines.push_back(static_cast<int>(l));

  out.load_shed = total_shed(res);
  out.is_blackout = is_blackout(out.load_shed, out.total_demand);
  out.fractional_overloads.assign(grid.lines.size(), 0.0);
  for (const auto& line : grid.lines)
    if (line.is_up()) out.fractional_overloads[line.id] = std::abs(line.flow) / line.flow_limit;
  return out;
}

CascadeOutcome run_cascade(Grid& grid, std::span<const double> demand, double p1, RandomStream& rng,
                           const DispatchSettings& settings) {
  Dispatcher dispatcher(settings);
  return run_cascade(grid, demand, p1, rng, dispatcher);
}

double mean_fractional_overload(const CascadeOutcome& outcome) {
  if (outcome.fractional_overloads.empty()) return 0.0;
  const double sum = std::accumulate(outcome.fractional_overloads.begin(), outcome.fractional_overloads.end(), 0.0);
  return sum / static_cast<double>(outcome.fractional_overloads.size());
}

}  // namespace opa
