#include "opa/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opa/simplex.hpp"

namespace opa {

DispatchError::DispatchError(int component, const std::string& what)
    : std::runtime_error("dispatch failed in component " + std::to_string(component) + ": " + what),
      component_(component) {}

double total_shed(const DispatchResult& result) {
  return std::accumulate(result.shed.begin(), result.shed.end(), 0.0);
}

// LP layout. Rows: one balance row per node, then one row per line:
//   balance i:  g_i + s_i - sum_{from=i} f_l + sum_{to=i} f_l = d_i
//   line l:     f_l - (theta_from - theta_to) / x_l + e_l = 0
// e_l is fixed at zero while the line is Up and free while it is Down, in
// which case f_l is fixed at zero. Outages are therefore pure bound changes
// and the basis survives them. All powers are divided by `scale`.
struct Dispatcher::State {
  int n = 0;
  int m = 0;
  double scale = 1.0;
  std::vector<int> gen_col, shed_col, theta_col, flow_col, slack_col;
  std::vector<char> line_up;
  std::vector<double> line_limit;
  int down_count = 0;

  // Structure the LP was built for.
  std::vector<int> from, to;
  std::vector<double> impedance;
  std::vector<char> is_gen;

  lp::Simplex simplex;

  State(lp::Model model) : simplex(std::move(model)) {}
};

namespace {

using State = Dispatcher::State;

bool same_structure(const State& s, const Grid& g) {
  if (s.n != static_cast<int>(g.nodes.size()) || s.m != static_cast<int>(g.lines.size())) return false;
  for (int i = 0; i < s.n; ++i)
    if (s.is_gen[i] != static_cast<char>(g.nodes[i].is_generator())) return false;
  for (int l = 0; l < s.m; ++l) {
    const auto& line = g.lines[l];
    if (s.from[l] != line.from || s.to[l] != line.to || s.impedance[l] != line.impedance) return false;
  }
  return true;
}

double gen_bound(const Grid& grid, std::span<const double> gen_limit, int i) {
  return gen_limit.empty() ? grid.nodes[i].gen_capacity : gen_limit[i];
}

std::unique_ptr<State> build_state(const Grid& grid, std::span<const double> demand, std::span<const double> gen_limit,
                                   const DispatchSettings& settings, double scale) {
  const int n = static_cast<int>(grid.nodes.size());
  const int m = static_cast<int>(grid.lines.size());
  // Angle references come from the full topology so that outages (which only
  // change bounds) never change which angles are fixed.
  Grid topology = grid;
  topology.restore_all_lines();
  const Components comps = connected_components(topology);

  lp::Model model;
  for (int i = 0; i < n; ++i) model.add_row(demand[i] / scale);
  for (int l = 0; l < m; ++l) model.add_row(0.0);

  std::vector<int> gen_col(n, -1), shed_col(n), theta_col(n), flow_col(m), slack_col(m);
  std::vector<std::pair<int, double>> entries;

  for (int i = 0; i < n; ++i) {
    if (!grid.nodes[i].is_generator()) continue;
    entries = {{i, 1.0}};
    gen_col[i] = model.add_column(settings.gen_cost, 0.0, gen_bound(grid, gen_limit, i) / scale, entries);
  }
  for (int i = 0; i < n; ++i) {
    entries = {{i, 1.0}};
    shed_col[i] = model.add_column(settings.shed_penalty, 0.0, demand[i] / scale, entries);
  }
  std::vector<std::vector<std::pair<int, double>>> theta_entries(n);
  for (int l = 0; l < m; ++l) {
    const auto& line = grid.lines[l];
    theta_entries[line.from].push_back({n + l, -1.0 / line.impedance});
    theta_entries[line.to].push_back({n + l, 1.0 / line.impedance});
  }
  for (int i = 0; i < n; ++i) {
    const bool reference = comps.members[comps.label[i]].front() == i;
    theta_col[i] = reference ? model.add_column(0.0, 0.0, 0.0, theta_entries[i])
                             : model.add_column(0.0, -lp::kInf, lp::kInf, theta_entries[i]);
  }
  for (int l = 0; l < m; ++l) {
    const auto& line = grid.lines[l];
    const double lim = line.flow_limit / scale;
    entries = {{line.from, -1.0}, {line.to, 1.0}, {n + l, 1.0}};
    flow_col[l] = line.is_up() ? model.add_column(0.0, -lim, lim, entries) : model.add_column(0.0, 0.0, 0.0, entries);
  }
  for (int l = 0; l < m; ++l) {
    entries = {{n + l, 1.0}};
    slack_col[l] = grid.lines[l].is_up() ? model.add_column(0.0, 0.0, 0.0, entries)
                                         : model.add_column(0.0, -lp::kInf, lp::kInf, entries);
  }

  auto st = std::make_unique<State>(std::move(model));
  st->n = n;
  st->m = m;
  st->scale = scale;
  st->gen_col = std::move(gen_col);
  st->shed_col = std::move(shed_col);
  st->theta_col = std::move(theta_col);
  st->flow_col = std::move(flow_col);
  st->slack_col = std::move(slack_col);
  st->line_up.resize(m);
  st->line_limit.resize(m);
  st->from.resize(m);
  st->to.resize(m);
  st->impedance.resize(m);
  st->is_gen.resize(n);
  for (int i = 0; i < n; ++i) st->is_gen[i] = grid.nodes[i].is_generator();
  for (int l = 0; l < m; ++l) {
    const auto& line = grid.lines[l];
    st->line_up[l] = line.is_up();
    st->line_limit[l] = line.flow_limit;
    st->from[l] = line.from;
    st->to[l] = line.to;
    st->impedance[l] = line.impedance;
    st->down_count += line.is_up() ? 0 : 1;
  }

  // Slack basis: shed on balance rows, flow (Up) or e (Down) on line rows.
  // With generation and angles at zero it is primal feasible.
  std::vector<int> basis(n + m);
  for (int i = 0; i < n; ++i) basis[i] = st->shed_col[i];
  for (int l = 0; l < m; ++l) basis[n + l] = grid.lines[l].is_up() ? st->flow_col[l] : st->slack_col[l];
  st->simplex.set_basis(basis);
  return st;
}

void set_inputs(State& st, const Grid& grid, std::span<const double> demand, std::span<const double> gen_limit) {
  auto& sx = st.simplex;
  for (int i = 0; i < st.n; ++i) {
    const double d = demand[i] / st.scale;
    sx.set_rhs(i, d);
    sx.set_bounds(st.shed_col[i], 0.0, d);
    if (st.gen_col[i] >= 0) sx.set_bounds(st.gen_col[i], 0.0, gen_bound(grid, gen_limit, i) / st.scale);
  }
  for (int l = 0; l < st.m; ++l) {
    const auto& line = grid.lines[l];
    if (line.is_up() && st.line_up[l] && line.flow_limit != st.line_limit[l]) {
      const double lim = line.flow_limit / st.scale;
      sx.set_bounds(st.flow_col[l], -lim, lim);
    }
    st.line_limit[l] = line.flow_limit;
  }
}

int component_of_row(const Grid& grid, int row) {
  if (row < 0) return 0;
  const Components comps = connected_components(grid);
  const int n = static_cast<int>(grid.nodes.size());
  const int node = row < n ? row : grid.lines[row - n].from;
  return comps.label[node];
}

DispatchResult extract(const State& st, const Grid& grid, std::span<const double> demand,
                       std::span<const double> gen_limit, const DispatchSettings& settings) {
  const auto& sx = st.simplex;
  const double s = st.scale;
  // Values within solver tolerance of zero are zero.
  auto value = [&](int col) {
    const double v = sx.value(col);
    return std::abs(v) <= 1e-9 ? 0.0 : v;
  };
  DispatchResult r;
  r.generation.assign(st.n, 0.0);
  r.shed.assign(st.n, 0.0);
  r.angles.assign(st.n, 0.0);
  r.flows.assign(st.m, 0.0);
  for (int i = 0; i < st.n; ++i) {
    if (st.gen_col[i] >= 0)
      r.generation[i] = std::clamp(value(st.gen_col[i]) * s, 0.0, gen_bound(grid, gen_limit, i));
    r.shed[i] = std::clamp(value(st.shed_col[i]) * s, 0.0, demand[i]);
    r.angles[i] = sx.value(st.theta_col[i]) * s;
  }
  for (int l = 0; l < st.m; ++l) {
    const auto& line = grid.lines[l];
    if (!line.is_up()) continue;
    r.flows[l] = std::clamp(value(st.flow_col[l]) * s, -line.flow_limit, line.flow_limit);
  }
  // Pin the lowest-numbered node of every component at angle zero.
  const Components comps = connected_components(grid);
  for (const auto& members : comps.members) {
    const double ref = r.angles[members.front()];
    for (int i : members) r.angles[i] -= ref;
  }
  double gen = 0.0, shed = 0.0;
  for (int i = 0; i < st.n; ++i) {
    gen += r.generation[i];
    shed += r.shed[i];
  }
  r.objective = settings.gen_cost * gen + settings.shed_penalty * shed;
  return r;
}

double default_scale(const Grid& grid, std::span<const double> demand) {
  const double total = std::accumulate(demand.begin(), demand.end(), 0.0);
  const double per_node = total / static_cast<double>(std::max<std::size_t>(grid.nodes.size(), 1));
  if (per_node > 0.0 && std::isfinite(per_node)) return per_node;
  const double base = grid.total_base_load() / static_cast<double>(std::max<std::size_t>(grid.nodes.size(), 1));
  return base > 0.0 ? base : 1.0;
}

void check_inputs(const Grid& grid, std::span<const double> demand, std::span<const double> gen_limit) {
  if (demand.size() != grid.nodes.size()) throw std::invalid_argument("demand must have one entry per node");
  for (double d : demand)
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("demand entries must be finite and >= 0");
  if (!gen_limit.empty()) {
    if (gen_limit.size() != grid.nodes.size()) throw std::invalid_argument("gen_limit must have one entry per node");
    for (double g : gen_limit)
      if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gen_limit entries must be finite and >= 0");
  }
}

}  // namespace

DispatchResult solve_dispatch(const DispatchProblem& problem) {
  check_inputs(problem.grid, problem.demand, problem.gen_limit);
  auto st = build_state(problem.grid, problem.demand, problem.gen_limit, problem.settings,
                        default_scale(problem.grid, problem.demand));
  const auto status = st->simplex.solve();
  if (status != lp::Status::Optimal)
    throw DispatchError(component_of_row(problem.grid, st->simplex.failed_row()), lp::to_string(status));
  return extract(*st, problem.grid, problem.demand, problem.gen_limit, problem.settings);
}

Dispatcher::Dispatcher(DispatchSettings settings) : settings_(settings) {}
Dispatcher::~Dispatcher() = default;
Dispatcher::Dispatcher(Dispatcher&&) noexcept = default;
Dispatcher& Dispatcher::operator=(Dispatcher&&) noexcept = default;

DispatchResult Dispatcher::solve(const Grid& grid, std::span<const double> demand, std::span<const double> gen_limit) {
  check_inputs(grid, demand, gen_limit);
  ++stats_.solves;

  auto cold = [&]() {
    ++stats_.cold_starts;
    all_up_snapshot_.reset();
    const double scale = grid.total_base_load() > 0.0 ? default_scale(grid, {}) : default_scale(grid, demand);
    state_ = build_state(grid, demand, gen_limit, settings_, scale);
    const long before = state_->simplex.iterations();
    const auto status = state_->simplex.solve();
    stats_.pivots += state_->simplex.iterations() - before;
    if (status != lp::Status::Optimal) {
      const int comp = component_of_row(grid, state_->simplex.failed_row());
      state_.reset();
      throw DispatchError(comp, lp::to_string(status));
    }
    return extract(*state_, grid, demand, gen_limit, settings_);
  };

  if (!state_ || !same_structure(*state_, grid)) return cold();

  const int grid_down = static_cast<int>(grid.lines.size() - grid.up_line_count());
  if (grid_down == 0 && state_->down_count > 0 && all_up_snapshot_) state_ = std::make_unique<State>(*all_up_snapshot_);

  State& st = *state_;
  auto& sx = st.simplex;
  const long before = sx.iterations();

  std::vector<int> newly_down, newly_up;
  for (int l = 0; l < st.m; ++l) {
    const bool up = grid.lines[l].is_up();
    if (!up && st.line_up[l]) newly_down.push_back(l);
    if (up && !st.line_up[l]) newly_up.push_back(l);
  }

  if (!newly_down.empty()) {
    if (st.down_count == 0) all_up_snapshot_ = std::make_unique<State>(st);
    // Decouple the line first (a relaxation, so the basis stays primal
    // feasible), then force its flow to zero (dual simplex repairs).
    for (int l : newly_down) sx.set_bounds(st.slack_col[l], -lp::kInf, lp::kInf);
    if (sx.solve() != lp::Status::Optimal) return cold();
    for (int l : newly_down) {
      sx.set_bounds(st.flow_col[l], 0.0, 0.0);
      st.line_up[l] = 0;
      ++st.down_count;
    }
  }
  for (int l : newly_up) {
    const double lim = grid.lines[l].flow_limit / st.scale;
    sx.set_bounds(st.slack_col[l], 0.0, 0.0);
    sx.set_bounds(st.flow_col[l], -lim, lim);
    st.line_up[l] = 1;
    --st.down_count;
  }
  set_inputs(st, grid, demand, gen_limit);

  const auto status = sx.solve();
  stats_.pivots += sx.iterations() - before;
  if (status != lp::Status::Optimal) return cold();
  return extract(st, grid, demand, gen_limit, settings_);
}

}  // namespace opa
