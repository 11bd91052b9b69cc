#include "opa/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace opa {

GridParseError::GridParseError(std::size_t line, const std::string& field, const std::string& what)
    : GridError("line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(field) {}

std::size_t Grid::generator_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.is_generator() ? 1 : 0;
  return n;
}

std::size_t Grid::up_line_count() const {
  std::size_t n = 0;
  for (const auto& line : lines) n += line.is_up() ? 1 : 0;
  return n;
}

double Grid::total_capacity() const {
  return std::accumulate(nodes.begin(), nodes.end(), 0.0,
                         [](double acc, const Node& n) { return acc + n.gen_capacity; });
}

double Grid::total_base_load() const {
  return std::accumulate(nodes.begin(), nodes.end(), 0.0,
                         [](double acc, const Node& n) { return acc + n.base_load; });
}

void Grid::validate() const {
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const Node& node = nodes[i];
    const std::string who = "node " + std::to_string(i);
    if (node.id != i) throw GridError(who + ": id " + std::to_string(node.id) + " out of order");
    if (!std::isfinite(node.base_load) || node.base_load < 0.0)
      throw GridError(who + ": base_load must be finite and >= 0");
    if (!std::isfinite(node.gen_capacity) || node.gen_capacity < 0.0)
      throw GridError(who + ": gen_capacity must be finite and >= 0");
    if (node.is_generator() != (node.gen_capacity > 0.0))
      throw GridError(who + ": gen_capacity must be positive exactly for generator nodes");
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const Line& line = lines[l];
    const std::string who = "line " + std::to_string(l);
    if (line.id != static_cast<int>(l)) throw GridError(who + ": id out of order");
    if (line.from < 0 || line.from >= n)
      throw GridError(who + ": endpoint " + std::to_string(line.from) + " is not a node");
    if (line.to < 0 || line.to >= n)
      throw GridError(who + ": endpoint " + std::to_string(line.to) + " is not a node");
    if (line.from == line.to) throw GridError(who + ": endpoints must be distinct");
    if (!(line.impedance > 0.0) || !std::isfinite(line.impedance))
      throw GridError(who + ": impedance must be positive");
    if (!(line.flow_limit > 0.0) || !std::isfinite(line.flow_limit))
      throw GridError(who + ": flow_limit must be positive");
  }
}

void Grid::restore_all_lines() {
  for (auto& line : lines) {
    line.status = LineStatus::Up;
    line.flow = 0.0;
  }
}

Components connected_components(const Grid& grid) {
  const std::size_t n = grid.nodes.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& line : grid.lines) {
    if (!line.is_up()) continue;
    const int a = find(line.from);
    const int b = find(line.to);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  Components out;
  out.label.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int r = find(static_cast<int>(i));
    if (root_label[r] < 0) {
      root_label[r] = static_cast<int>(out.members.size());
      out.members.emplace_back();
    }
    out.label[i] = root_label[r];
    out.members[root_label[r]].push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace opa
