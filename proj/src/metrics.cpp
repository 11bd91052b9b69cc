#include "opa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "opa/demand.hpp"

namespace opa {

double stress(std::span<const double> per_sample_means) {
  if (per_sample_means.empty()) throw std::invalid_argument("stress needs at least one sample");
  return std::accumulate(per_sample_means.begin(), per_sample_means.end(), 0.0) /
         static_cast<double>(per_sample_means.size());
}

double network_mean_overload(std::span<const double> fractional_overloads) {
  if (fractional_overloads.empty()) return 0.0;
  return std::accumulate(fractional_overloads.begin(), fractional_overloads.end(), 0.0) /
         static_cast<double>(fractional_overloads.size());
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("linear_fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      sse += r * r;
    }
    f.slope_stderr = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

RankFunction rank_function(std::span<const double> sizes, const RankFitOptions& options) {
  std::vector<double> s;
  s.reserve(sizes.size());
  for (double v : sizes)
    if (v > 0.0 && std::isfinite(v)) s.push_back(v);
  std::sort(s.begin(), s.end(), std::greater<>());

  RankFunction out;
  out.points.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.points.emplace_back(static_cast<int>(i + 1), s[i]);
  if (static_cast<int>(s.size()) < options.min_sizes) return out;

  const auto k = static_cast<std::size_t>(std::ceil(options.window_fraction * static_cast<double>(s.size())));
  const std::size_t window = std::min(s.size(), std::max(k, static_cast<std::size_t>(options.min_window)));
  std::vector<double> lr(window), ls(window);
  for (std::size_t i = 0; i < window; ++i) {
    lr[i] = std::log(static_cast<double>(i + 1));
    ls[i] = std::log(s[i]);
  }
  out.tail_exponent = -linear_fit(lr, ls).slope;
  out.fit_points = static_cast<int>(window);
  return out;
}

double blackout_frequency(std::span<const BlackoutRecord> records, double days) {
  if (!(days >= 1.0)) throw std::invalid_argument("blackout_frequency needs days >= 1");
  const auto n = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.is_blackout; });
  return static_cast<double>(n) / days;
}

double mean_blackout_size(std::span<const BlackoutRecord> records) {
  double sum = 0.0;
  long n = 0;
  for (const auto& r : records) {
    if (!r.is_blackout) continue;
    sum += r.size();
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

std::vector<double> blackout_sizes(std::span<const BlackoutRecord> records) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.is_blackout) out.push_back(r.size());
  return out;
}

std::vector<BlackoutRecord> after_warmup(std::span<const BlackoutRecord> records, int warmup_days) {
  std::vector<BlackoutRecord> out;
  for (const auto& r : records)
    if (r.day >= warmup_days) out.push_back(r);
  return out;
}

std::vector<long> intraday_histogram(std::span<const BlackoutRecord> records, int bin_minutes) {
  constexpr int kDayMinutes = kStepsPerDay * kMinutesPerStep;
  if (bin_minutes <= 0 || kDayMinutes % bin_minutes != 0 || bin_minutes % kMinutesPerStep != 0)
    throw std::invalid_argument("bin width " + std::to_string(bin_minutes) +
                                " min must divide 1440 and be a multiple of 5");
  std::vector<long> h(static_cast<std::size_t>(kDayMinutes / bin_minutes), 0);
  for (const auto& r : records) {
    if (!r.is_blackout) continue;
    if (r.step < 0 || r.step >= kStepsPerDay) throw std::invalid_argument("record step outside the day");
    ++h[static_cast<std::size_t>(r.step * kMinutesPerStep / bin_minutes)];
  }
  return h;
}

std::map<int, long> overload_histogram(std::span<const BlackoutRecord> records) {
  std::map<int, long> h;
  for (const auto& r : records)
    if (r.is_blackout) ++h[r.n_overloaded_lines];
  return h;
}

std::vector<double> windowed_frequency(std::span<const BlackoutRecord> records, int first_day, int end_day,
                                       int window) {
  if (window <= 0) throw std::invalid_argument("window must be positive");
  const int n = std::max(0, (end_day - first_day) / window);
  std::vector<double> counts(static_cast<std::size_t>(n), 0.0);
  for (const auto& r : records) {
    if (!r.is_blackout || r.day < first_day) continue;
    const int w = (r.day - first_day) / window;
    if (w < n) counts[static_cast<std::size_t>(w)] += 1.0;
  }
  for (double& c : counts) c /= window;
  return counts;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

RunStatistics compute_statistics(std::span<const BlackoutRecord> records, int days, int warmup_days,
                                 std::span<const double> stress_samples, int intraday_bin_minutes,
                                 const RankFitOptions& rank_options) {
  const auto kept = after_warmup(records, warmup_days);
  RunStatistics st;
  st.days = static_cast<double>(days - warmup_days);
  st.events = static_cast<long>(kept.size());
  st.blackouts = std::count_if(kept.begin(), kept.end(), [](const auto& r) { return r.is_blackout; });
  st.blackout_frequency = blackout_frequency(kept, st.days);
  st.mean_blackout_size = mean_blackout_size(kept);
  const auto sizes = blackout_sizes(kept);
  st.rank = rank_function(sizes, rank_options);
  st.intraday_histogram = intraday_histogram(kept, intraday_bin_minutes);
  st.overload_histogram = overload_histogram(kept);
  st.mean_stress = stress_samples.empty() ? 0.0 : stress(stress_samples);
  return st;
}

}  // namespace opa
