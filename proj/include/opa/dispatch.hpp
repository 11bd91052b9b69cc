#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "opa/grid.hpp"

namespace opa {

struct DispatchSettings {
  double gen_cost = 1.0;
  double shed_penalty = 100.0;
};

/// One dispatch instance. `gen_limit`, when given, replaces gen_capacity as the
/// per-node generation upper bound (used for the intraday generation limit).
struct DispatchProblem {
  const Grid& grid;
  std::span<const double> demand;
  std::span<const double> gen_limit = {};
  DispatchSettings settings = {};
};

struct DispatchResult {
  std::vector<double> generation;
  std::vector<double> shed;
  std::vector<double> flows;
  std::vector<double> angles;
  double objective = 0.0;
};

double total_shed(const DispatchResult& result);

/// Raised when the LP solver fails numerically; names the component involved.
class DispatchError : public std::runtime_error {
 public:
  DispatchError(int component, const std::string& what);
  int component() const { return component_; }

 private:
  int component_;
};

/// DC-flow generation dispatch with load shedding:
///   min  c * sum(generation) + W * sum(shed)
///   s.t. generation_i + shed_i - sum(out flows) + sum(in flows) = demand_i
///        flow_l = (angle_from - angle_to) / impedance_l      (Up lines)
///        0 <= generation_i <= limit_i,  0 <= shed_i <= demand_i,  |flow_l| <= F_l
/// with one angle per connected component fixed at zero. Down lines carry no
/// flow. Stateless: every call solves from scratch.
DispatchResult solve_dispatch(const DispatchProblem& problem);

struct DispatcherStats {
  long solves = 0;
  long cold_starts = 0;
  long pivots = 0;
};

/// Same contract as solve_dispatch, but keeps the simplex basis between calls
/// so consecutive dispatches that differ by demand, limits, or a few line
/// outages are re-optimized from the previous solution. The grid's structure
/// (nodes, line endpoints, impedances) must not change between calls; if it
/// does the dispatcher rebuilds.
class Dispatcher {
 public:
  explicit Dispatcher(DispatchSettings settings = {});
  ~Dispatcher();
  Dispatcher(Dispatcher&&) noexcept;
  Dispatcher& operator=(Dispatcher&&) noexcept;
  Dispatcher(const Dispatcher&) = delete;
  Dispatcher& operator=(const Dispatcher&) = delete;

  DispatchResult solve(const Grid& grid, std::span<const double> demand, std::span<const double> gen_limit = {});

  const DispatchSettings& settings() const { return settings_; }
  const DispatcherStats& stats() const { return stats_; }

  struct State;  // solver state, defined in dispatch.cpp

 private:
  DispatchSettings settings_;
  std::unique_ptr<State> state_;
  std::unique_ptr<State> all_up_snapshot_;
  DispatcherStats stats_;
};

}  // namespace opa
