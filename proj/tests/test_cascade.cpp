#include <doctest.h>

#include <algorithm>

#include "opa/cascade.hpp"
#include "support/fixtures.hpp"
#include "support/reference_lp.hpp"

using namespace opa;
using namespace opa::testing;

namespace {

// Generator at 0, load 60 at 1. The direct line carries two thirds of the flow
// and saturates first; after it fails the detour 0-2-1 saturates on 0-2.
Grid triangle() {
  Grid g;
  g.nodes = {gen_node(0, 0.0, 100.0), load_node(1, 60.0), load_node(2, 0.0)};
  g.lines = {make_line(0, 0, 1, 1.0, 30.0), make_line(1, 0, 2, 1.0, 50.0), make_line(2, 2, 1, 1.0, 100.0)};
  return g;
}

}  // namespace

TEST_CASE("blackout threshold is strict") {
  CHECK_FALSE(is_blackout(1e-5, 1.0));
  CHECK(is_blackout(std::nextafter(1e-5, 1.0), 1.0));
  CHECK(is_blackout(1e-5 + 1e-12, 1.0));
  CHECK_FALSE(is_blackout(1.0, 1e5));
  CHECK(is_blackout(2e-5, 1.0));
  CHECK(is_blackout(2.0, 1e5));
  CHECK_FALSE(is_blackout(0.0, 1.0));
  CHECK_FALSE(is_blackout(0.0, 0.0));
}

TEST_CASE("initiating outages") {
  Grid g = desk_grid();
  RandomStream rng(1);
  CHECK(apply_initiating_outages(g, 0.0, rng).empty());
  CHECK(g.up_line_count() == g.line_count());
  g.lines[3].status = LineStatus::Down;
  const auto all = apply_initiating_outages(g, 1.0, rng);
  CHECK(all.size() == g.line_count() - 1);
  CHECK(std::find(all.begin(), all.end(), 3) == all.end());
  CHECK(g.up_line_count() == 0);
  CHECK_THROWS_AS(apply_initiating_outages(g, 1.5, rng), std::invalid_argument);
}

TEST_CASE("initiating outage rate matches the per-step probability") {
  // 617 lines at p0 = 1.44e-6/day gives 8.9e-4 failures per day. Check the
  // per-step sampler at a larger rate where counting is practical.
  SyntheticGridParams p;
  Grid g = generate_synthetic(p, 1);
  CHECK(617 * 1.44e-6 == doctest::Approx(8.8848e-4));
  RandomStream rng(5);
  const double p_step = 1e-3;
  const int trials = 2000;
  long count = 0;
  for (int t = 0; t < trials; ++t) {
    count += static_cast<long>(apply_initiating_outages(g, p_step, rng).size());
    g.restore_all_lines();
  }
  const double expected = 617.0 * trials * p_step;
  CHECK(std::abs(count - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("quiet cascade dispatches once") {
  Grid g;
  g.nodes = {gen_node(0, 0.0, 10.0), load_node(1, 5.0)};
  g.lines = {make_line(0, 0, 1, 1.0, 10.0)};
  RandomStream rng(1);
  const std::vector<double> d = {0.0, 5.0};
  const auto out = run_cascade(g, d, 1.0, rng);
  CHECK(out.load_shed == doctest::Approx(0.0));
  CHECK_FALSE(out.is_blackout);
  CHECK(out.redispatch_count == 1);
  CHECK(out.failed_lines.empty());
  CHECK(out.overloaded_lines.empty());
  CHECK(out.fractional_overloads[0] == doctest::Approx(0.5));
  CHECK(g.lines[0].flow == doctest::Approx(5.0));
}

TEST_CASE("triangle cascade matches the oracle on the residual network") {
  Grid g = triangle();
  const auto d = base_demand(g);
  RandomStream rng(1);
  const auto out = run_cascade(g, d, 1.0, rng);
  CHECK(out.failed_lines == std::vector<int>{0, 1});
  CHECK(out.overloaded_lines == std::vector<int>{0, 1});
  CHECK(out.redispatch_count == 3);
  CHECK(g.lines[0].status == LineStatus::Down);
  CHECK(g.lines[1].status == LineStatus::Down);
  CHECK(g.lines[2].status == LineStatus::Up);
  const auto ref = reference_dispatch(g, d);
  CHECK(out.load_shed == doctest::Approx(ref.total_shed));
  CHECK(out.load_shed == doctest::Approx(60.0));
  CHECK(out.total_demand == 60.0);
  CHECK(out.is_blackout);

  // intermediate stages against the oracle too
  Grid first = triangle();
  CHECK(reference_dispatch(first, d).total_shed == doctest::Approx(15.0));
  first.lines[0].status = LineStatus::Down;
  CHECK(reference_dispatch(first, d).total_shed == doctest::Approx(10.0));
}

TEST_CASE("p1 = 0 leaves lines alone and sheds like one dispatch") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Grid g = small_grid(seed);
    const auto d = base_demand(g);
    const auto before = g;
    RandomStream rng(seed);
    const auto out = run_cascade(g, d, 0.0, rng);
    CHECK(out.failed_lines.empty());
    CHECK(out.redispatch_count == 1);
    for (std::size_t l = 0; l < g.lines.size(); ++l) CHECK(g.lines[l].status == before.lines[l].status);
    CHECK(out.load_shed == doctest::Approx(total_shed(solve_dispatch({before, d}))).scale(1.0));
  }
}

TEST_CASE("cascade invariants and determinism") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Grid a = small_grid(seed);
    for (auto& l : a.lines) l.flow_limit *= 0.3;
    Grid b = a;
    const Grid start = a;
    const auto d = base_demand(a);
    RandomStream ra(seed), rb(seed);
    const auto oa = run_cascade(a, d, 0.5, ra);
    const auto ob = run_cascade(b, d, 0.5, rb);
    CHECK(oa.failed_lines == ob.failed_lines);
    CHECK(oa.load_shed == ob.load_shed);
    CHECK(oa.fractional_overloads == ob.fractional_overloads);
    CHECK(a == b);
    CHECK(oa.is_blackout == is_blackout(oa.load_shed, oa.total_demand));
    CHECK(oa.redispatch_count <= static_cast<int>(start.lines.size()) + 1);
    for (std::size_t l = 0; l < a.lines.size(); ++l) {
      const bool failed = std::binary_search(oa.failed_lines.begin(), oa.failed_lines.end(), static_cast<int>(l));
      if (failed) {
        CHECK(start.lines[l].is_up());
        CHECK(a.lines[l].status == LineStatus::Down);
      } else {
        CHECK(a.lines[l].status == start.lines[l].status);
      }
      CHECK(oa.fractional_overloads[l] >= 0.0);
      CHECK(oa.fractional_overloads[l] <= 1.0 + 1e-6);
      if (!a.lines[l].is_up()) CHECK(oa.fractional_overloads[l] == 0.0);
    }
  }
}

TEST_CASE("overload test tolerates solver round-off") {
  Line l = make_line(0, 0, 1, 1.0, 10.0);
  CHECK(is_overloaded(l, 10.0));
  CHECK(is_overloaded(l, -10.0));
  CHECK(is_overloaded(l, 10.0 * (1 - 0.5e-6)));
  CHECK_FALSE(is_overloaded(l, 9.99));
  l.status = LineStatus::Down;
  CHECK_FALSE(is_overloaded(l, 10.0));
}

TEST_CASE("mean fractional overload") {
  CascadeOutcome o;
  o.fractional_overloads = {1.0, 0.0, 0.5, 0.5};
  CHECK(mean_fractional_overload(o) == doctest::Approx(0.5));
}
