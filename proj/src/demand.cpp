#include "opa/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "opa/format.hpp"

namespace opa {

IntradayProfile::IntradayProfile(std::span<const double> samples) {
  if (samples.size() != kStepsPerDay)
    throw std::invalid_argument("profile needs " + std::to_string(kStepsPerDay) + " samples, got " +
                                std::to_string(samples.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] > 0.0) || !std::isfinite(samples[i]))
      throw std::invalid_argument("profile sample " + std::to_string(i) + " must be finite and > 0");
    sum += samples[i];
  }
  const double mean = sum / kStepsPerDay;
  for (std::size_t i = 0; i < samples.size(); ++i) samples_[i] = samples[i] / mean;
}

IntradayProfile IntradayProfile::flat() {
  std::vector<double> s(kStepsPerDay, 1.0);
  return IntradayProfile(s);
}

IntradayProfile IntradayProfile::standard() {
  struct Bump {
    double hour, width, height;
  };
  constexpr Bump bumps[] = {{10.0, 2.5, 0.30}, {20.0, 2.0, 0.45}};
  std::vector<double> s(kStepsPerDay);
  for (int k = 0; k < kStepsPerDay; ++k) {
    const double h = k * kMinutesPerStep / 60.0;
    double v = 1.0;
    for (const auto& b : bumps) {
      double d = std::abs(h - b.hour);
      d = std::min(d, 24.0 - d);  // wrap around midnight
      v += b.height * std::exp(-0.5 * d * d / (b.width * b.width));
    }
    s[k] = v;
  }
  return IntradayProfile(s);
}

double IntradayProfile::peak_value() const { return *std::max_element(samples_.begin(), samples_.end()); }

int IntradayProfile::peak_step() const {
  return static_cast<int>(std::max_element(samples_.begin(), samples_.end()) - samples_.begin());
}

IntradayProfile load_profile(std::istream& in) {
  std::vector<double> v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto x = parse_double(t);
    if (!x) throw std::invalid_argument("profile line " + std::to_string(line_no) + ": expected a number");
    v.push_back(*x);
  }
  return IntradayProfile(v);
}

IntradayProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file " + path.string());
  try {
    return load_profile(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

double profile_value(const IntradayProfile& profile, int step) {
  if (step < 0 || step >= kStepsPerDay) throw std::out_of_range("step " + std::to_string(step) + " outside the day");
  return profile[step];
}

double nodal_demand(const Node& node, int step, const IntradayProfile& profile, double day_factor) {
  return node.base_load * profile_value(profile, step) * day_factor;
}

void scheduled_demand(const Grid& grid, int step, const IntradayProfile& profile, double day_factor,
                      std::vector<double>& out) {
  const double m = profile_value(profile, step) * day_factor;
  out.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) out[i] = grid.nodes[i].base_load * m;
}

double generation_limit_factor(double scheduled_total, double total_capacity, double headroom) {
  if (!(headroom >= 0.0)) throw std::invalid_argument("headroom must be >= 0");
  if (!(total_capacity > 0.0)) return 0.0;
  return std::min(1.0, (1.0 + headroom) * scheduled_total / total_capacity);
}

void generation_limit(const Grid& grid, double scheduled_total, double headroom, std::vector<double>& out) {
  const double f = generation_limit_factor(scheduled_total, grid.total_capacity(), headroom);
  out.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) out[i] = grid.nodes[i].gen_capacity * f;
}

double draw_burst_factor(RandomStream& rng) { return std::min(std::abs(rng.normal()), kBurstCap); }

std::vector<BurstEvent> sample_bursts(std::span<const double> scheduled, int day, int step, double p3, double b,
                                      RandomStream& rng) {
  if (!(p3 >= 0.0 && p3 <= 1.0)) throw std::invalid_argument("p3 must be in [0, 1]");
  if (!(b >= 0.0)) throw std::invalid_argument("b must be >= 0");
  std::vector<BurstEvent> out;
  for (std::size_t i = 0; i < scheduled.size(); ++i) {
    if (!rng.bernoulli(p3)) continue;
    BurstEvent e;
    e.node = static_cast<int>(i);
    e.day = day;
    e.step = step;
    e.rel_amplitude = b * draw_burst_factor(rng);
    e.power = e.rel_amplitude * scheduled[i];
    out.push_back(e);
  }
  return out;
}

}  // namespace opa
