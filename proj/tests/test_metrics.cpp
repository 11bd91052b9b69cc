#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "opa/metrics.hpp"
#include "opa/rng.hpp"

using namespace opa;

namespace {

BlackoutRecord blackout(int day, int step, double shed, int overloaded = 0) {
  return {day, step, shed, 100.0, 0, overloaded, true};
}

// s = U^-2: size against rank falls as rank^-2.
std::vector<double> power_law_sample(std::uint64_t seed, int n) {
  RandomStream rng(seed);
  std::vector<double> s(n);
  for (auto& v : s) v = std::pow(1.0 - rng.uniform(), -2.0);
  return s;
}

}  // namespace

TEST_CASE("stress averages") {
  CHECK(stress(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(stress(std::vector<double>{1.0, 1.0, 1.0}) == 1.0);
  CHECK(stress(std::vector<double>{0.4, 0.6}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(stress(std::vector<double>{}), std::invalid_argument);
  CHECK(network_mean_overload(std::vector<double>{1.0, 0.0, 0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("rank function sorts") {
  const auto r = rank_function(std::vector<double>{0.1, 0.4, 0.2});
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0] == std::pair{1, 0.4});
  CHECK(r.points[1] == std::pair{2, 0.2});
  CHECK(r.points[2] == std::pair{3, 0.1});
  CHECK_FALSE(r.tail_exponent.has_value());
  CHECK(rank_function(std::vector<double>(19, 1.0)).points.size() == 19);
  CHECK_FALSE(rank_function(std::vector<double>(19, 1.0)).tail_exponent);
  CHECK(rank_function(std::vector<double>{0.0, -1.0, 0.5}).points.size() == 1);
}

TEST_CASE("tail exponent of an exact power law") {
  // quantiles of s = U^-2 without sampling noise
  const int n = 10000;
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = std::pow((k + 0.5) / n, -2.0);
  const auto r = rank_function(s);
  REQUIRE(r.tail_exponent);
  CHECK(*r.tail_exponent == doctest::Approx(2.0).epsilon(0.05));
  CHECK(r.fit_points == 1000);
}

TEST_CASE("tail exponent recovered from sampled power laws") {
  // One 10^4 sample scatters by about 0.09 around 2.03, so check the mean
  // over independent samples and a loose bound on each.
  const int reps = 20;
  double sum = 0.0;
  for (int k = 0; k < reps; ++k) {
    const auto r = rank_function(power_law_sample(100 + k, 10000));
    REQUIRE(r.tail_exponent);
    CHECK(std::abs(*r.tail_exponent - 2.0) < 0.35);
    sum += *r.tail_exponent;
  }
  CHECK(std::abs(sum / reps - 2.0) <= 0.1);
}

TEST_CASE("rank function is permutation invariant") {
  auto s = power_law_sample(5, 500);
  const auto a = rank_function(s);
  std::mt19937 g(1);
  std::shuffle(s.begin(), s.end(), g);
  const auto b = rank_function(s);
  CHECK(a.points == b.points);
  CHECK(a.tail_exponent == b.tail_exponent);
}

TEST_CASE("blackout frequency") {
  std::vector<BlackoutRecord> none;
  CHECK(blackout_frequency(none, 100) == 0.0);
  std::vector<BlackoutRecord> thirty;
  for (int i = 0; i < 30; ++i) thirty.push_back(blackout(i, 0, 1.0));
  thirty.push_back({5, 5, 0.0, 100.0, 1, 0, false});  // failure without blackout
  CHECK(blackout_frequency(thirty, 100) == doctest::Approx(0.3));
  CHECK(blackout_frequency(thirty, 100) / blackout_frequency(thirty, 100) == 1.0);
  CHECK_THROWS_AS(blackout_frequency(thirty, 0.5), std::invalid_argument);

  // additivity over disjoint sets
  std::vector<BlackoutRecord> a(thirty.begin(), thirty.begin() + 12), b(thirty.begin() + 12, thirty.end());
  CHECK(blackout_frequency(thirty, 100) == doctest::Approx(blackout_frequency(a, 100) + blackout_frequency(b, 100)));
}

TEST_CASE("mean size and sizes use blackouts only") {
  std::vector<BlackoutRecord> r = {blackout(0, 0, 2.0), blackout(1, 0, 4.0), {2, 0, 0.0001, 100.0, 0, 0, false}};
  CHECK(mean_blackout_size(r) == doctest::Approx(0.03));
  CHECK(blackout_sizes(r).size() == 2);
  CHECK(mean_blackout_size(std::vector<BlackoutRecord>{}) == 0.0);
}

TEST_CASE("intraday histogram") {
  std::vector<BlackoutRecord> r(5, blackout(1, 240, 1.0));
  const auto h = intraday_histogram(r, 60);
  REQUIRE(h.size() == 24);
  for (int b = 0; b < 24; ++b) CHECK(h[b] == (b == 20 ? 5 : 0));
  const auto e = intraday_histogram(std::vector<BlackoutRecord>{}, 60);
  CHECK(std::accumulate(e.begin(), e.end(), 0L) == 0);
  CHECK(intraday_histogram(r, 30).size() == 48);
  CHECK_THROWS_AS(intraday_histogram(r, 7), std::invalid_argument);
  CHECK_THROWS_AS(intraday_histogram(r, 50), std::invalid_argument);
  r.push_back({1, 10, 0.0, 100.0, 2, 0, false});
  CHECK(intraday_histogram(r, 60)[0] == 0);
}

TEST_CASE("overload histogram") {
  std::vector<BlackoutRecord> r = {blackout(0, 0, 1, 1), blackout(0, 1, 1, 1), blackout(0, 2, 1, 2),
                                   blackout(0, 3, 1, 8)};
  const auto h = overload_histogram(r);
  CHECK(h == std::map<int, long>{{1, 2}, {2, 1}, {8, 1}});
  CHECK(overload_histogram(std::vector<BlackoutRecord>{}).empty());
}

TEST_CASE("warmup filter and windows") {
  std::vector<BlackoutRecord> r;
  for (int d = 0; d < 100; ++d) r.push_back(blackout(d, 0, 1.0));
  CHECK(after_warmup(r, 40).size() == 60);
  CHECK(after_warmup(r, 40).front().day == 40);
  const auto w = windowed_frequency(r, 0, 95, 20);
  REQUIRE(w.size() == 4);
  for (double f : w) CHECK(f == doctest::Approx(1.0));
}

TEST_CASE("linear fit and spearman") {
  std::vector<double> x = {0, 1, 2, 3, 4}, y = {1, 3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0).scale(1.0));
  CHECK(spearman(x, y) == doctest::Approx(1.0));
  std::vector<double> down = {5, 4, 4, 2, 1};
  CHECK(spearman(x, down) < -0.9);
  CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("statistics totals") {
  std::vector<BlackoutRecord> r;
  RandomStream rng(3);
  for (int i = 0; i < 300; ++i) {
    const int day = static_cast<int>(rng.below(200));
    const bool bo = rng.bernoulli(0.7);
    r.push_back({day, static_cast<int>(rng.below(288)), bo ? 1.0 + rng.uniform() : 0.0, 100.0, 1,
                 static_cast<int>(rng.below(5)), bo});
  }
  std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.day < b.day; });
  const std::vector<double> stress_samples = {0.5, 0.7};
  const auto s = compute_statistics(r, 200, 50, stress_samples);
  const auto kept = after_warmup(r, 50);
  const long blackouts = std::count_if(kept.begin(), kept.end(), [](auto& x) { return x.is_blackout; });
  CHECK(s.blackouts == blackouts);
  CHECK(s.events == static_cast<long>(kept.size()));
  CHECK(s.days == 150.0);
  CHECK(s.blackout_frequency == doctest::Approx(blackouts / 150.0));
  CHECK(std::accumulate(s.intraday_histogram.begin(), s.intraday_histogram.end(), 0L) == blackouts);
  long total = 0;
  for (auto [k, v] : s.overload_histogram) total += v;
  CHECK(total == blackouts);
  CHECK(s.mean_stress == doctest::Approx(0.6));
  CHECK(s.rank.points.size() == static_cast<std::size_t>(blackouts));
}
