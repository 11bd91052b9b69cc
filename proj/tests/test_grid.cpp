#include <doctest.h>

#include <sstream>

#include "opa/grid.hpp"
#include "support/fixtures.hpp"

using namespace opa;
using namespace opa::testing;

namespace {

std::string serialize(const Grid& g) {
  std::ostringstream out;
  save_grid(g, out);
  return out.str();
}

Grid parse(const std::string& text) {
  std::istringstream in(text);
  return load_grid(in);
}

}  // namespace

TEST_CASE("load_grid reads counts from a large synthetic file") {
  SyntheticGridParams p;  // 400 nodes, 60 generators, 617 lines
  const Grid g = parse(serialize(generate_synthetic(p, 1)));
  CHECK(g.node_count() == 400);
  CHECK(g.generator_count() == 60);
  CHECK(g.line_count() == 617);
  CHECK(g.up_line_count() == 617);
  for (const auto& l : g.lines) CHECK(l.flow == 0.0);
}

TEST_CASE("single node without lines") {
  const Grid g = parse("# tiny\nnodes 1 lines 0\nnode 0 L 5 0\n");
  CHECK(g.node_count() == 1);
  CHECK(g.line_count() == 0);
  CHECK(connected_components(g).count() == 1);
}

TEST_CASE("line with a bad endpoint is rejected with its id") {
  std::string text = "nodes 10 lines 1\n";
  for (int i = 0; i < 10; ++i) text += "node " + std::to_string(i) + " L 1 0\n";
  text += "line 0 3 999 1 5\n";
  try {
    parse(text);
    FAIL("expected an error");
  } catch (const GridError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 0") != std::string::npos);
    CHECK(what.find("999") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line and field") {
  try {
    parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 L x 0\nline 0 0 1 1 1\n");
    FAIL("expected an error");
  } catch (const GridParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "base_load");
  }
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 Q 1 0\nline 0 0 1 1 1\n"), GridParseError);
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 L 1 0\n"), GridParseError);
  CHECK_THROWS_AS(parse(""), GridParseError);
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 L 1 0\nline 0 0 1 -1 1\n"), GridError);
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 L 1 0\nline 0 0 1 1 0\n"), GridError);
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 0\nnode 1 L 1 0\nline 0 0 1 1 1\n"), GridError);
  CHECK_THROWS_AS(parse("nodes 2 lines 1\nnode 0 G 1 5\nnode 1 L 1 0\nline 0 1 1 1 1\n"), GridError);
}

TEST_CASE("minimal synthetic grid") {
  SyntheticGridParams p;
  p.nodes = 2;
  p.generators = 1;
  p.lines = 1;
  const Grid g = generate_synthetic(p, 7);
  CHECK(g.node_count() == 2);
  CHECK(g.generator_count() == 1);
  REQUIRE(g.line_count() == 1);
  CHECK(std::min(g.lines[0].from, g.lines[0].to) == 0);
  CHECK(std::max(g.lines[0].from, g.lines[0].to) == 1);
}

TEST_CASE("synthetic grids are deterministic, connected and sized as asked") {
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    SyntheticGridParams p;
    p.nodes = 50;
    p.generators = 8;
    p.lines = 70;
    const Grid a = generate_synthetic(p, seed);
    CHECK(serialize(a) == serialize(generate_synthetic(p, seed)));
    CHECK(a.node_count() == 50);
    CHECK(a.generator_count() == 8);
    CHECK(a.line_count() == 70);
    CHECK(connected_components(a).count() == 1);
    CHECK(a.total_capacity() == doctest::Approx(1.4 * a.total_base_load()).epsilon(1e-12));
    CHECK(a.total_base_load() > 0.0);
  }
  SyntheticGridParams bad;
  bad.nodes = 10;
  bad.generators = 2;
  bad.lines = 8;
  CHECK_THROWS_AS(generate_synthetic(bad, 1), GridError);
  bad.lines = 10;
  bad.generators = 11;
  CHECK_THROWS_AS(generate_synthetic(bad, 1), GridError);
}

TEST_CASE("grid round-trip is exact") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Grid g = small_grid(seed);
    g.restore_all_lines();
    CHECK(parse(serialize(g)) == g);
  }
  const Grid big = desk_grid();
  CHECK(parse(serialize(big)) == big);
}

TEST_CASE("connected components") {
  Grid path;
  path.nodes = {gen_node(0, 1, 5), load_node(1, 1), load_node(2, 1)};
  path.lines = {make_line(0, 0, 1, 1, 1), make_line(1, 1, 2, 1, 1)};
  CHECK(connected_components(path).count() == 1);
  path.lines[1].status = LineStatus::Down;
  const auto c = connected_components(path);
  REQUIRE(c.count() == 2);
  CHECK(c.members[0] == std::vector<int>{0, 1});
  CHECK(c.members[1] == std::vector<int>{2});
  CHECK(c.label[2] == 1);

  Grid empty;
  for (int i = 0; i < 4; ++i) empty.nodes.push_back(load_node(i, 1));
  CHECK(connected_components(empty).count() == 4);
}

TEST_CASE("restore_all_lines") {
  Grid g = small_grid(3);
  for (auto& l : g.lines) {
    l.status = LineStatus::Down;
    l.flow = 2.0;
  }
  g.restore_all_lines();
  CHECK(g.up_line_count() == g.line_count());
  for (const auto& l : g.lines) CHECK(l.flow == 0.0);
}
