#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opa/config.hpp"
#include "opa/simulation.hpp"

namespace opa {

struct SweepPoint {
  std::string label;                                    // e.g. "b=0.1 control=on"
  std::vector<std::pair<std::string, std::string>> settings;  // key, text value
  SimConfig config;
};

struct SweepAxis {
  std::vector<SweepPoint> points;
  /// Set when the axis holds b * p3 fixed; b is derived per point.
  std::optional<double> bp3;
  /// p3 of the normalizing point in a constant-product sweep.
  double reference_p3 = 0.00025;
};

/// Grammar: `key=v1,v2,...;key=...` over SimConfig keys, expanded as a
/// Cartesian product with the first key outermost. The special entry
/// `bp3=<x>` sets b = x / p3 for every point (needs a p3 list), and
/// `ref_p3=<x>` overrides the normalizing p3. Throws ConfigError.
SweepAxis parse_axis(std::string_view spec, const SimConfig& base);

struct ReplicaResult {
  RunStatistics stats;
  BurstCounts bursts;
};

struct SweepRow {
  SweepPoint point;
  std::vector<ReplicaResult> replicas;
  double mean_frequency = 0.0;
  double frequency_stderr = 0.0;
  double mean_size = 0.0;
  double mean_stress = 0.0;
  /// f_B(point) / f_B(reference) for constant-product sweeps.
  std::optional<double> frequency_ratio;
  std::vector<long> intraday_histogram;      // summed over replicas
  std::map<int, long> overload_histogram;    // summed over replicas
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool constant_product = false;
};

/// Every (point, replica) run starts from `start` when given, otherwise from
/// the point's configured grid. Replica r uses config.for_replica(r), so all
/// points share replica seeds.
SweepResult run_sweep(const SweepAxis& axis, int replicas, const std::optional<Grid>& start = std::nullopt);

/// Reference implementation: same results, one run at a time.
SweepResult run_sweep_serial(const SweepAxis& axis, int replicas, const std::optional<Grid>& start = std::nullopt);

}  // namespace opa
