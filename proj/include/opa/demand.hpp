#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "opa/grid.hpp"
#include "opa/rng.hpp"

namespace opa {

inline constexpr int kStepsPerDay = 288;
inline constexpr int kMinutesPerStep = 5;
/// |r| is capped here.
inline constexpr double kBurstCap = 5.0;

/// Demand multiplier per 5-minute step, mean 1 over the day.
class IntradayProfile {
 public:
  /// Rescales to mean 1. Throws std::invalid_argument unless there are 288
  /// finite positive samples.
  explicit IntradayProfile(std::span<const double> samples);

  static IntradayProfile flat();
  /// Morning bump at 10:00 and a larger evening bump at 20:00.
  static IntradayProfile standard();

  double operator[](int step) const { return samples_[static_cast<std::size_t>(step)]; }
  const std::array<double, kStepsPerDay>& samples() const { return samples_; }
  double peak_value() const;
  int peak_step() const;

 private:
  std::array<double, kStepsPerDay> samples_{};
};

/// One multiplier per non-comment line.
IntradayProfile load_profile(std::istream& in);
IntradayProfile load_profile_file(const std::filesystem::path& path);

/// Throws std::out_of_range outside [0, 288).
double profile_value(const IntradayProfile& profile, int step);

/// P_{i,0}(t) = base_load * profile(step) * day_factor.
double nodal_demand(const Node& node, int step, const IntradayProfile& profile, double day_factor);

/// P_{i,0}(t) for every node.
void scheduled_demand(const Grid& grid, int step, const IntradayProfile& profile, double day_factor,
                      std::vector<double>& out);

/// Fraction of installed capacity available when scheduled demand is
/// `scheduled_total`: min(1, (1 + headroom) * scheduled_total / P_G).
double generation_limit_factor(double scheduled_total, double total_capacity, double headroom);

/// Per-node generation limits at that fraction.
void generation_limit(const Grid& grid, double scheduled_total, double headroom, std::vector<double>& out);

enum class BurstStatus : std::uint8_t { Applied, Postponed, Recovered };

struct BurstEvent {
  int node = 0;
  int day = 0;
  int step = 0;
  double rel_amplitude = 0.0;  // b * min(|r|, 5)
  double power = 0.0;          // rel_amplitude * P_{i,0} when sampled (MW)
  BurstStatus status = BurstStatus::Applied;
};

/// min(|r|, 5) for standard normal r; two uniform draws.
double draw_burst_factor(RandomStream& rng);

/// One trial per node (one draw each), plus two draws per burst.
/// `scheduled` holds P_{i,0} at this step.
std::vector<BurstEvent> sample_bursts(std::span<const double> scheduled, int day, int step, double p3, double b,
                                      RandomStream& rng);

}  // namespace opa
