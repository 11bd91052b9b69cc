#pragma once

#include <vector>

#include "opa/grid.hpp"
#include "opa/rng.hpp"

namespace opa::testing {

inline Node load_node(int id, double load) { return {id, NodeKind::Load, load, 0.0}; }
inline Node gen_node(int id, double load, double cap) { return {id, NodeKind::GeneratorLoad, load, cap}; }
inline Line make_line(int id, int a, int b, double x, double limit) {
  Line l;
  l.id = id;
  l.from = a;
  l.to = b;
  l.impedance = x;
  l.flow_limit = limit;
  return l;
}

inline std::vector<double> base_demand(const Grid& g) {
  std::vector<double> d;
  for (const auto& n : g.nodes) d.push_back(n.base_load);
  return d;
}

/// Small random grids (2..5 nodes, up to 6 lines, some Down) with at least one
/// generator. Deterministic in `seed`.
inline Grid small_grid(std::uint64_t seed) {
  RandomStream rng(seed);
  Grid g;
  const int n = 2 + static_cast<int>(rng.below(4));
  for (int i = 0; i < n; ++i) {
    const bool gen = i == 0 || rng.bernoulli(0.4);
    const double load = 1.0 + 9.0 * rng.uniform();
    g.nodes.push_back(gen ? gen_node(i, load, 2.0 + 20.0 * rng.uniform()) : load_node(i, load));
  }
  const int m = 1 + static_cast<int>(rng.below(6));
  for (int k = 0; k < m; ++k) {
    const int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n - 1));
    if (b >= a) ++b;
    auto line = make_line(static_cast<int>(g.lines.size()), a, b, 0.5 + rng.uniform(), 0.5 + 8.0 * rng.uniform());
    if (rng.bernoulli(0.15)) line.status = LineStatus::Down;
    g.lines.push_back(line);
  }
  g.validate();
  return g;
}

inline Grid desk_grid(std::uint64_t seed = 6) {
  SyntheticGridParams p;
  p.nodes = 100;
  p.generators = 15;
  p.lines = 154;
  return generate_synthetic(p, seed);
}

}  // namespace opa::testing
