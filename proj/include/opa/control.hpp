#pragma once

#include <limits>
#include <span>
#include <vector>

#include "opa/demand.hpp"
#include "opa/rng.hpp"

namespace opa {

struct ControlPolicy {
  bool enabled = false;
  double pl1 = std::numeric_limits<double>::infinity();  // postpone above
  double pl2 = std::numeric_limits<double>::infinity();  // recover below
  double p4 = 0.00125;

  void validate() const;
};

/// Postponed bursts, oldest first.
struct PendingQueue {
  std::vector<BurstEvent> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// Applies every burst unless control is on and the pre-burst demand exceeds
/// pl1, in which case all of them are queued as Postponed.
std::vector<BurstEvent> filter_bursts(std::vector<BurstEvent> bursts, double total_demand_pre_burst,
                                      const ControlPolicy& policy, PendingQueue& queue);

/// Below pl2 each queued burst recovers with probability p4 (one draw per
/// entry, queue order); recovered entries leave the queue. Nothing happens at
/// or above pl2.
std::vector<BurstEvent> recover_pending(PendingQueue& queue, double total_demand_pre_burst, const ControlPolicy& policy,
                                        RandomStream& rng);

struct Thresholds {
  double pl1 = 0.0;
  double pl2 = 0.0;
};

/// pl1 = f1 * peak, pl2 = f2 * peak, with 0 < f2 <= f1 <= 1.
Thresholds calibrate_thresholds(double scheduled_peak, double f1, double f2);

/// Peak of the day's total scheduled demand: sum(base) * max(profile) * day_factor.
double scheduled_peak(const Grid& grid, const IntradayProfile& profile, double day_factor);

}  // namespace opa
