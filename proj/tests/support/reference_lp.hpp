#pragma once
// Test-only reference dispatch. Dense two-phase tableau simplex with Bland's
// rule over a flow formulation: line flows are split into nonnegative parts
// and Kirchhoff's voltage law is imposed on a fundamental cycle basis. It
// shares neither algorithm nor formulation with opa::solve_dispatch.

#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "opa/grid.hpp"

namespace opa::testing {

struct ReferenceLp {
  // min c'x  s.t.  eq rows: A x = b,  ub rows: A x <= b,  x >= 0
  std::vector<std::vector<double>> eq_a, ub_a;
  std::vector<double> eq_b, ub_b, cost;
};

struct ReferenceSolution {
  double objective = 0.0;
  std::vector<double> x;
};

/// Returns nullopt if infeasible; throws on unbounded.
inline std::optional<ReferenceSolution> solve_reference_lp(const ReferenceLp& lp) {
  const std::size_t nv = lp.cost.size();
  const std::size_t neq = lp.eq_a.size();
  const std::size_t nub = lp.ub_a.size();
  const std::size_t rows = neq + nub;
  // Columns: structural | ub slacks | eq artificials | rhs
  const std::size_t n_slack = nub, n_art = neq;
  const std::size_t cols = nv + n_slack + n_art;
  std::vector<std::vector<double>> t(rows, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(rows);

  for (std::size_t i = 0; i < neq; ++i) {
    const double sign = lp.eq_b[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) t[i][j] = sign * lp.eq_a[i][j];
    t[i][nv + n_slack + i] = 1.0;
    t[i][cols] = sign * lp.eq_b[i];
    basis[i] = nv + n_slack + i;
  }
  for (std::size_t k = 0; k < nub; ++k) {
    const std::size_t i = neq + k;
    if (lp.ub_b[k] < 0) throw std::invalid_argument("reference lp expects nonnegative ub rhs");
    for (std::size_t j = 0; j < nv; ++j) t[i][j] = lp.ub_a[k][j];
    t[i][nv + k] = 1.0;
    t[i][cols] = lp.ub_b[k];
    basis[i] = nv + k;
  }

  auto run = [&](const std::vector<double>& c, std::size_t allowed_cols) {
    for (int guard = 0; guard < 100000; ++guard) {
      // Reduced costs d_j = c_j - c_B B^-1 a_j; the tableau already holds B^-1 A.
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        bool basic = false;
        for (std::size_t i = 0; i < rows; ++i) basic = basic || basis[i] == j;
        if (basic) continue;
        double d = c[j];
        for (std::size_t i = 0; i < rows; ++i) d -= c[basis[i]] * t[i][j];
        if (d < -1e-10) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter == cols) return;
      std::size_t leave = rows;
      double best = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (t[i][enter] > 1e-12) {
          const double ratio = t[i][cols] / t[i][enter];
          if (leave == rows || ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == rows) throw std::runtime_error("reference lp unbounded");
      const double piv = t[leave][enter];
      for (auto& v : t[leave]) v /= piv;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == leave) continue;
        const double f = t[i][enter];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
      }
      basis[leave] = enter;
    }
    throw std::runtime_error("reference lp did not terminate");
  };

  std::vector<double> phase1(cols, 0.0);
  for (std::size_t a = 0; a < n_art; ++a) phase1[nv + n_slack + a] = 1.0;
  run(phase1, cols);
  double infeas = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] >= nv + n_slack) infeas += t[i][cols];
  if (infeas > 1e-8) return std::nullopt;
  // Drive degenerate artificials out where possible.
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < nv + n_slack) continue;
    for (std::size_t j = 0; j < nv + n_slack; ++j) {
      if (std::abs(t[i][j]) > 1e-9) {
        const double piv = t[i][j];
        for (auto& v : t[i]) v /= piv;
        for (std::size_t k = 0; k < rows; ++k) {
          if (k == i) continue;
          const double f = t[k][j];
          if (f == 0.0) continue;
          for (std::size_t c = 0; c <= cols; ++c) t[k][c] -= f * t[i][c];
        }
        basis[i] = j;
        break;
      }
    }
  }
  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < nv; ++j) phase2[j] = lp.cost[j];
  run(phase2, nv + n_slack);

  ReferenceSolution sol;
  sol.x.assign(nv, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < nv) sol.x[basis[i]] = t[i][cols];
  for (std::size_t j = 0; j < nv; ++j) sol.objective += lp.cost[j] * sol.x[j];
  return sol;
}

struct ReferenceDispatch {
  double objective = 0.0;
  double total_shed = 0.0;
  std::vector<double> shed;
  std::vector<double> flows;  // per line, zero for Down lines
};

/// Builds and solves the flow/cycle formulation of the dispatch LP.
inline ReferenceDispatch reference_dispatch(const Grid& grid, const std::vector<double>& demand,
                                            double gen_cost = 1.0, double shed_penalty = 100.0) {
  const std::size_t n = grid.nodes.size();
  const std::size_t m = grid.lines.size();
  std::vector<int> gen_var(n, -1), shed_var(n, -1), fplus(m, -1), fminus(m, -1);
  std::size_t nv = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (grid.nodes[i].is_generator()) gen_var[i] = static_cast<int>(nv++);
  for (std::size_t i = 0; i < n; ++i) shed_var[i] = static_cast<int>(nv++);
  for (std::size_t l = 0; l < m; ++l) {
    if (!grid.lines[l].is_up()) continue;
    fplus[l] = static_cast<int>(nv++);
    fminus[l] = static_cast<int>(nv++);
  }

  ReferenceLp lp;
  lp.cost.assign(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (gen_var[i] >= 0) lp.cost[gen_var[i]] = gen_cost;
    lp.cost[shed_var[i]] = shed_penalty;
  }

  // Nodal balance: g + s - outflow + inflow = d
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(nv, 0.0);
    if (gen_var[i] >= 0) row[gen_var[i]] = 1.0;
    row[shed_var[i]] = 1.0;
    for (std::size_t l = 0; l < m; ++l) {
      if (fplus[l] < 0) continue;
      const auto& line = grid.lines[l];
      if (line.from == static_cast<int>(i)) {
        row[fplus[l]] -= 1.0;
        row[fminus[l]] += 1.0;
      }
      if (line.to == static_cast<int>(i)) {
        row[fplus[l]] += 1.0;
        row[fminus[l]] -= 1.0;
      }
    }
    lp.eq_a.push_back(row);
    lp.eq_b.push_back(demand[i]);
  }

  // Fundamental cycles from a BFS forest over Up lines.
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, line)
  for (std::size_t l = 0; l < m; ++l) {
    if (fplus[l] < 0) continue;
    adj[grid.lines[l].from].push_back({grid.lines[l].to, static_cast<int>(l)});
    adj[grid.lines[l].to].push_back({grid.lines[l].from, static_cast<int>(l)});
  }
  std::vector<int> parent(n, -1), parent_line(n, -1), depth(n, -1);
  std::vector<bool> tree_line(m, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::queue<int> q;
    q.push(static_cast<int>(root));
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (auto [v, l] : adj[u]) {
        if (depth[v] >= 0) continue;
        depth[v] = depth[u] + 1;
        parent[v] = u;
        parent_line[v] = l;
        tree_line[l] = true;
        q.push(v);
      }
    }
  }
  // Voltage drop along line l traversed a->b equals x_l * f_l if a == from.
  auto add_drop = [&](std::vector<double>& row, int l, int a) {
    const auto& line = grid.lines[l];
    const double s = (line.from == a) ? 1.0 : -1.0;
    row[fplus[l]] += s * line.impedance;
    row[fminus[l]] -= s * line.impedance;
  };
  for (std::size_t l = 0; l < m; ++l) {
    if (fplus[l] < 0 || tree_line[l]) continue;
    std::vector<double> row(nv, 0.0);
    // Cycle: from -> to along the line, then back to `from` through the tree.
    const auto& line = grid.lines[l];
    add_drop(row, static_cast<int>(l), line.from);
    int a = line.to, b = line.from;
    // Walk both ends up to their common ancestor; path a -> ... -> lca -> ... -> b
    std::vector<std::pair<int, int>> down;  // segments from lca toward b, recorded as (line, start node)
    while (a != b) {
      if (depth[a] >= depth[b]) {
        add_drop(row, parent_line[a], a);
        a = parent[a];
      } else {
        down.push_back({parent_line[b], parent[b]});
        b = parent[b];
      }
    }
    for (auto it = down.rbegin(); it != down.rend(); ++it) add_drop(row, it->first, it->second);
    lp.eq_a.push_back(row);
    lp.eq_b.push_back(0.0);
  }

  auto bound = [&](int var, double ub) {
    std::vector<double> row(nv, 0.0);
    row[var] = 1.0;
    lp.ub_a.push_back(row);
    lp.ub_b.push_back(ub);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (gen_var[i] >= 0) bound(gen_var[i], grid.nodes[i].gen_capacity);
    bound(shed_var[i], demand[i]);
  }
  for (std::size_t l = 0; l < m; ++l) {
    if (fplus[l] < 0) continue;
    bound(fplus[l], grid.lines[l].flow_limit);
    bound(fminus[l], grid.lines[l].flow_limit);
  }

  auto sol = solve_reference_lp(lp);
  if (!sol) throw std::runtime_error("reference dispatch infeasible");
  ReferenceDispatch out;
  out.objective = sol->objective;
  out.shed.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.shed[i] = sol->x[shed_var[i]];
    out.total_shed += out.shed[i];
  }
  out.flows.assign(m, 0.0);
  for (std::size_t l = 0; l < m; ++l)
    if (fplus[l] >= 0) out.flows[l] = sol->x[fplus[l]] - sol->x[fminus[l]];
  return out;
}

}  // namespace opa::testing
