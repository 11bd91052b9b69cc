#include "opa/control.hpp"

#include <stdexcept>

namespace opa {

void ControlPolicy::validate() const {
  if (!(pl2 <= pl1)) throw std::invalid_argument("control policy needs pl2 <= pl1");
  if (!(p4 >= 0.0 && p4 <= 1.0)) throw std::invalid_argument("p4 must be in [0, 1]");
}

std::vector<BurstEvent> filter_bursts(std::vector<BurstEvent> bursts, double total_demand_pre_burst,
                                      const ControlPolicy& policy, PendingQueue& queue) {
  if (!policy.enabled || !(total_demand_pre_burst > policy.pl1)) {
    for (auto& b : bursts) b.status = BurstStatus::Applied;
    return bursts;
  }
  for (auto& b : bursts) {
    b.status = BurstStatus::Postponed;
    queue.entries.push_back(b);
  }
  return {};
}

std::vector<BurstEvent> recover_pending(PendingQueue& queue, double total_demand_pre_burst, const ControlPolicy& policy,
                                        RandomStream& rng) {
  std::vector<BurstEvent> out;
  if (!(total_demand_pre_burst < policy.pl2) || queue.empty()) return out;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < queue.entries.size(); ++i) {
    if (rng.bernoulli(policy.p4)) {
      out.push_back(queue.entries[i]);
      out.back().status = BurstStatus::Recovered;
    } else {
      queue.entries[keep++] = queue.entries[i];
    }
  }
  queue.entries.resize(keep);
  return out;
}

Thresholds calibrate_thresholds(double scheduled_peak, double f1, double f2) {
  if (!(f2 > 0.0 && f2 <= f1 && f1 <= 1.0)) throw std::invalid_argument("threshold fractions need 0 < f2 <= f1 <= 1");
  return {f1 * scheduled_peak, f2 * scheduled_peak};
}

double scheduled_peak(const Grid& grid, const IntradayProfile& profile, double day_factor) {
  return grid.total_base_load() * profile.peak_value() * day_factor;
}

}  // namespace opa
