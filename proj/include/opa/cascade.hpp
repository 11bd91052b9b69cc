#pragma once

#include <span>
#include <vector>

#include "opa/dispatch.hpp"
#include "opa/grid.hpp"
#include "opa/rng.hpp"

namespace opa {

/// L_S / P_D above this is an official blackout.
inline constexpr double kBlackoutThreshold = 1e-5;
/// A line is overloaded when |F| >= F_max * (1 - kOverloadTolerance).
inline constexpr double kOverloadTolerance = 1e-6;

struct CascadeOutcome {
  double load_shed = 0.0;
  double total_demand = 0.0;
  bool is_blackout = false;
  std::vector<int> failed_lines;      // outaged by overload trials, ascending
  std::vector<int> overloaded_lines;  // at their limit in any dispatch of the cascade, ascending
  int redispatch_count = 0;
  std::vector<double> fractional_overloads;  // |F| / F_max per line, final dispatch; 0 for Down lines
};

/// Strict comparison of the shed ratio against kBlackoutThreshold.
bool is_blackout(double load_shed, double total_demand);

bool is_overloaded(const Line& line, double flow);

/// Each Up line fails independently with probability p0_step. One draw per
/// Up line, in id order. Returns the outaged ids.
std::vector<int> apply_initiating_outages(Grid& grid, double p0_step, RandomStream& rng);

/// Dispatch, trial every overloaded Up line with probability p1, outage the
/// failures and redispatch until a dispatch produces no new failure. Line
/// flows in `grid` are left at the final dispatch.
CascadeOutcome run_cascade(Grid& grid, std::span<const double> demand, double p1, RandomStream& rng,
                           Dispatcher& dispatcher, std::span<const double> gen_limit = {});

/// Same, with a fresh dispatcher.
CascadeOutcome run_cascade(Grid& grid, std::span<const double> demand, double p1, RandomStream& rng,
                           const DispatchSettings& settings = {});

/// Mean of the fractional overloads over all lines (Down lines count as 0).
double mean_fractional_overload(const CascadeOutcome& outcome);

}  // namespace opa
