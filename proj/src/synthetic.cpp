#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include <Eigen/Dense>

#include "opa/grid.hpp"
#include "opa/rng.hpp"

namespace opa {

namespace {

double uniform_in(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

template <class T>
void shuffle(std::vector<T>& v, RandomStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

Grid generate_synthetic(const SyntheticGridParams& p, std::uint64_t seed) {
  if (p.nodes < 2) throw GridError("synthetic grid needs at least 2 nodes");
  if (p.generators < 1 || p.generators > p.nodes) throw GridError("generator count must be in [1, nodes]");
  if (p.lines < p.nodes - 1) throw GridError("need at least nodes-1 lines for a connected grid");
  const long long max_lines = static_cast<long long>(p.nodes) * (p.nodes - 1) / 2;
  if (p.lines > max_lines) throw GridError("too many lines for a simple graph on this many nodes");
  if (!(p.mean_load > 0.0) || !(p.initial_margin >= 0.0) || !(p.limit_factor > 0.0) || !(p.min_limit_fraction > 0.0))
    throw GridError("synthetic grid parameters must be positive");

  RandomStream rng(seed);
  const int n = p.nodes;

  Grid g;
  g.nodes.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<char> is_gen(n, 0);
  for (int k = 0; k < p.generators; ++k) is_gen[order[k]] = 1;

  for (int i = 0; i < n; ++i) {
    auto& node = g.nodes[i];
    node.id = i;
    node.kind = is_gen[i] ? NodeKind::GeneratorLoad : NodeKind::Load;
    node.base_load = uniform_in(rng, 0.5, 1.5) * p.mean_load;
  }
  std::vector<double> weight(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (is_gen[i]) weight[i] = uniform_in(rng, 0.5, 1.5);
  const double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
  const double target = (1.0 + p.initial_margin) * g.total_base_load();
  for (int i = 0; i < n; ++i) g.nodes[i].gen_capacity = weight[i] / wsum * target;

  // Random tree: each node in a random order attaches to an earlier one.
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::set<std::pair<int, int>> edges;
  std::vector<std::pair<int, int>> edge_list;
  auto add = [&](int a, int b) {
    auto e = std::minmax(a, b);
    if (a == b || !edges.insert(e).second) return false;
    edge_list.push_back(e);
    return true;
  };
  for (int k = 1; k < n; ++k) add(order[k], order[rng.below(k)]);
  while (static_cast<int>(edge_list.size()) < p.lines) {
    const int a = static_cast<int>(rng.below(n));
    const int b = static_cast<int>(rng.below(n));
    add(a, b);
  }
  std::sort(edge_list.begin(), edge_list.end());

  g.lines.resize(edge_list.size());
  for (std::size_t l = 0; l < edge_list.size(); ++l) {
    auto& line = g.lines[l];
    line.id = static_cast<int>(l);
    line.from = edge_list[l].first;
    line.to = edge_list[l].second;
    line.impedance = uniform_in(rng, 0.5, 1.5);
  }

  // Size limits from the base-load power flow with every generator running
  // at the same fraction of its capacity. Unlike an LP dispatch this flow is
  // unique, so the grid does not depend on solver tie-breaking.
  const double share = g.total_base_load() / g.total_capacity();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  Eigen::VectorXd inject(n - 1);
  for (int i = 1; i < n; ++i) inject(i - 1) = share * g.nodes[i].gen_capacity - g.nodes[i].base_load;
  for (const auto& line : g.lines) {
    const double y = 1.0 / line.impedance;
    const int a = line.from - 1, b = line.to - 1;
    if (a >= 0) lap(a, a) += y;
    if (b >= 0) lap(b, b) += y;
    if (a >= 0 && b >= 0) {
      lap(a, b) -= y;
      lap(b, a) -= y;
    }
  }
  const Eigen::VectorXd theta = lap.ldlt().solve(inject);
  auto angle = [&](int i) { return i == 0 ? 0.0 : theta(i - 1); };
  std::vector<double> flow(g.lines.size());
  double mean_abs = 0.0;
  for (std::size_t l = 0; l < g.lines.size(); ++l) {
    const auto& line = g.lines[l];
    flow[l] = (angle(line.from) - angle(line.to)) / line.impedance;
    mean_abs += std::abs(flow[l]);
  }
  mean_abs /= static_cast<double>(g.lines.size());
  const double floor = std::max(p.min_limit_fraction * mean_abs, 1e-3 * p.mean_load);
  for (std::size_t l = 0; l < g.lines.size(); ++l) g.lines[l].flow_limit = p.limit_factor * std::max(std::abs(flow[l]), floor);

  g.validate();
  return g;
}

}  // namespace opa
