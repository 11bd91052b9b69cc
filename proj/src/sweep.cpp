#include "opa/sweep.hpp"

#include <cmath>
#include <exception>
#include <numeric>

#include "opa/format.hpp"

namespace opa {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

ReplicaResult run_one(const SweepPoint& point, int replica, const std::optional<Grid>& start) {
  const SimConfig cfg = point.config.for_replica(static_cast<std::uint64_t>(replica));
  auto res = start ? run_simulation(cfg, *start) : run_simulation(cfg);
  return {std::move(res.stats), res.bursts};
}

SweepResult assemble(const SweepAxis& axis, std::vector<std::vector<ReplicaResult>> results) {
  SweepResult out;
  out.constant_product = axis.bp3.has_value();
  for (std::size_t p = 0; p < axis.points.size(); ++p) {
    SweepRow row;
    row.point = axis.points[p];
    row.replicas = std::move(results[p]);
    const double n = static_cast<double>(row.replicas.size());
    std::vector<double> freq;
    for (const auto& r : row.replicas) {
      freq.push_back(r.stats.blackout_frequency);
      row.mean_size += r.stats.mean_blackout_size / n;
      row.mean_stress += r.stats.mean_stress / n;
      if (row.intraday_histogram.size() < r.stats.intraday_histogram.size())
        row.intraday_histogram.resize(r.stats.intraday_histogram.size(), 0);
      for (std::size_t k = 0; k < r.stats.intraday_histogram.size(); ++k)
        row.intraday_histogram[k] += r.stats.intraday_histogram[k];
      for (const auto& [k, v] : r.stats.overload_histogram) row.overload_histogram[k] += v;
    }
    row.mean_frequency = std::accumulate(freq.begin(), freq.end(), 0.0) / n;
    if (freq.size() > 1) {
      double ss = 0.0;
      for (double f : freq) ss += (f - row.mean_frequency) * (f - row.mean_frequency);
      row.frequency_stderr = std::sqrt(ss / (n - 1.0) / n);
    }
    out.rows.push_back(std::move(row));
  }

  if (axis.bp3) {
    // Normalize by the point that differs only in p3 (and hence b) and sits
    // at the reference p3.
    auto others = [](const SweepPoint& pt) {
      std::vector<std::pair<std::string, std::string>> v;
      for (const auto& kv : pt.settings)
        if (kv.first != "p3" && kv.first != "b") v.push_back(kv);
      return v;
    };
    for (auto& row : out.rows) {
      for (const auto& ref : out.rows) {
        if (ref.point.config.p3 != axis.reference_p3 || others(ref.point) != others(row.point)) continue;
        if (ref.mean_frequency > 0.0) row.frequency_ratio = row.mean_frequency / ref.mean_frequency;
        break;
      }
    }
  }
  return out;
}

void check(const SweepAxis& axis, int replicas) {
  if (axis.points.empty()) throw ConfigError("sweep axis has no points");
  if (replicas < 1) throw ConfigError("sweep needs at least one replica");
}

}  // namespace

SweepAxis parse_axis(std::string_view spec, const SimConfig& base) {
  SweepAxis axis;
  std::vector<std::pair<std::string, std::vector<std::string>>> dims;
  for (auto part : split(spec, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ConfigError("axis entry '" + std::string(part) + "' needs key=values");
    const std::string key(trim(part.substr(0, eq)));
    const auto values = split(part.substr(eq + 1), ',');
    if (key == "bp3" || key == "ref_p3") {
      auto v = values.size() == 1 ? parse_double(values[0]) : std::nullopt;
      if (!v || !(*v > 0.0)) throw ConfigError("axis key '" + key + "' needs one positive number");
      if (key == "bp3")
        axis.bp3 = *v;
      else
        axis.reference_p3 = *v;
      continue;
    }
    for (const auto& d : dims)
      if (d.first == key) throw ConfigError("axis key '" + key + "' given twice");
    get_config_value(base, key);  // rejects unknown keys
    std::vector<std::string> vals;
    for (auto v : values) {
      if (v.empty()) throw ConfigError("axis key '" + key + "' has an empty value");
      vals.emplace_back(v);
    }
    dims.emplace_back(key, std::move(vals));
  }
  if (dims.empty()) throw ConfigError("sweep axis has no points");
  if (axis.bp3) {
    bool has_p3 = false;
    for (const auto& d : dims) {
      has_p3 = has_p3 || d.first == "p3";
      if (d.first == "b") throw ConfigError("axis cannot list b together with bp3");
    }
    if (!has_p3) throw ConfigError("bp3 needs a p3 list on the axis");
  }

  std::vector<std::size_t> idx(dims.size(), 0);
  while (true) {
    SweepPoint pt;
    pt.config = base;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      const auto& [key, vals] = dims[d];
      set_config_value(pt.config, key, vals[idx[d]]);
      pt.settings.emplace_back(key, vals[idx[d]]);
    }
    if (axis.bp3) {
      pt.config.b = *axis.bp3 / pt.config.p3;
      pt.settings.emplace_back("b", format_double(pt.config.b));
    }
    for (const auto& [k, v] : pt.settings) pt.label += (pt.label.empty() ? "" : " ") + k + "=" + v;
    pt.config.validate();
    axis.points.push_back(std::move(pt));

    std::size_t d = dims.size();
    while (d > 0) {
      --d;
      if (++idx[d] < dims[d].second.size()) break;
      idx[d] = 0;
      if (d == 0) return axis;
    }
  }
}

SweepResult run_sweep_serial(const SweepAxis& axis, int replicas, const std::optional<Grid>& start) {
  check(axis, replicas);
  std::vector<std::vector<ReplicaResult>> results(axis.points.size());
  for (std::size_t p = 0; p < axis.points.size(); ++p)
    for (int r = 0; r < replicas; ++r) results[p].push_back(run_one(axis.points[p], r, start));
  return assemble(axis, std::move(results));
}

SweepResult run_sweep(const SweepAxis& axis, int replicas, const std::optional<Grid>& start) {
  check(axis, replicas);
  const auto n_points = static_cast<long>(axis.points.size());
  const long total = n_points * replicas;
  std::vector<std::vector<ReplicaResult>> results(axis.points.size(), std::vector<ReplicaResult>(replicas));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < total; ++k) {
    const auto p = static_cast<std::size_t>(k / replicas);
    const int r = static_cast<int>(k % replicas);
    try {
      results[p][static_cast<std::size_t>(r)] = run_one(axis.points[p], r, start);
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return assemble(axis, std::move(results));
}

}  // namespace opa
