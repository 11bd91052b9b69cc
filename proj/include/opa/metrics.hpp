#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace opa {

/// One cascade with load shed or a line failure.
struct BlackoutRecord {
  int day = 0;
  int step = 0;
  double load_shed = 0.0;
  double total_demand = 0.0;
  int n_failed_lines = 0;
  int n_overloaded_lines = 0;
  bool is_blackout = false;

  double size() const { return total_demand > 0.0 ? load_shed / total_demand : 0.0; }
  bool operator==(const BlackoutRecord&) const = default;
};

/// Time average of per-sample network-mean fractional overloads.
double stress(std::span<const double> per_sample_means);

/// (1/N) sum |F| / F_max over all N lines, Down lines contributing 0.
double network_mean_overload(std::span<const double> fractional_overloads);

struct RankFunction {
  std::vector<std::pair<int, double>> points;  // (rank, size), size descending
  std::optional<double> tail_exponent;
  int fit_points = 0;
};

struct RankFitOptions {
  /// Fit over ranks 1..ceil(window_fraction * K).
  double window_fraction = 0.1;
  /// No exponent below this many sizes.
  int min_sizes = 20;
  /// Minimum number of points in the fit window.
  int min_window = 10;
};

/// Sorts sizes descending and fits log(size) = a - alpha log(rank) by least
/// squares over the top of the ranking; tail_exponent = alpha. Nonpositive
/// sizes are dropped.
RankFunction rank_function(std::span<const double> sizes, const RankFitOptions& options = {});

/// Blackout records per day.
double blackout_frequency(std::span<const BlackoutRecord> records, double days);
double mean_blackout_size(std::span<const BlackoutRecord> records);
std::vector<double> blackout_sizes(std::span<const BlackoutRecord> records);

/// Records with day >= warmup_days.
std::vector<BlackoutRecord> after_warmup(std::span<const BlackoutRecord> records, int warmup_days);

/// Blackouts per time-of-day bin. bin_minutes must divide 1440 and be a
/// multiple of the 5-minute step; throws std::invalid_argument otherwise.
std::vector<long> intraday_histogram(std::span<const BlackoutRecord> records, int bin_minutes);

/// Blackout counts keyed by number of overloaded lines.
std::map<int, long> overload_histogram(std::span<const BlackoutRecord> records);

/// Blackout frequency in consecutive windows of `window` days covering
/// [first_day, end_day). A trailing partial window is dropped.
std::vector<double> windowed_frequency(std::span<const BlackoutRecord> records, int first_day, int end_day,
                                       int window);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares; needs at least two distinct x values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct RunStatistics {
  double days = 0.0;
  long blackouts = 0;
  long events = 0;
  double blackout_frequency = 0.0;
  double mean_blackout_size = 0.0;
  RankFunction rank;
  std::vector<long> intraday_histogram;
  std::map<int, long> overload_histogram;
  double mean_stress = 0.0;
};

/// Statistics over post-warmup records; `stress_samples` are the per-step
/// network means of the same period.
RunStatistics compute_statistics(std::span<const BlackoutRecord> records, int days, int warmup_days,
                                 std::span<const double> stress_samples, int intraday_bin_minutes = 60,
                                 const RankFitOptions& rank_options = {});

}  // namespace opa
