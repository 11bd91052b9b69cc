#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace opa {

enum class NodeKind : std::uint8_t { Load, GeneratorLoad };
enum class LineStatus : std::uint8_t { Up, Down };

/// A bus. `base_load` is the demand at profile value 1 (MW); `gen_capacity`
/// is the maximum generator output (MW), zero for pure load buses.
struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Load;
  double base_load = 0.0;
  double gen_capacity = 0.0;

  bool is_generator() const { return kind == NodeKind::GeneratorLoad; }
  bool operator==(const Node&) const = default;
};

/// Undirected transmission line; `flow` is signed from `from` to `to`.
struct Line {
  int id = 0;
  int from = 0;
  int to = 0;
  double impedance = 1.0;  // reactance, per-unit
  double flow_limit = 1.0;
  LineStatus status = LineStatus::Up;
  double flow = 0.0;

  bool is_up() const { return status == LineStatus::Up; }
  bool operator==(const Line&) const = default;
};

/// Thrown when a grid violates its structural invariants.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by the grid reader; carries the 1-based input line and field.
class GridParseError : public GridError {
 public:
  GridParseError(std::size_t line, const std::string& field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

struct Grid {
  std::vector<Node> nodes;
  std::vector<Line> lines;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t line_count() const { return lines.size(); }
  std::size_t generator_count() const;
  std::size_t up_line_count() const;

  /// P_G, the sum of generator capacities.
  double total_capacity() const;
  double total_base_load() const;

  /// Throws GridError naming the offending node or line.
  void validate() const;

  /// Marks every line Up and zeroes flows.
  void restore_all_lines();

  bool operator==(const Grid&) const = default;
};

/// Partition of nodes by Up-line connectivity. Components are numbered in
/// order of their smallest node id.
struct Components {
  std::vector<int> label;                // per node
  std::vector<std::vector<int>> members;  // per component, ascending ids

  std::size_t count() const { return members.size(); }
};

Components connected_components(const Grid& grid);

// Text format:
//   nodes <n> lines <m>
//   node <id> <L|G> <base_load> <gen_capacity>
//   line <id> <from> <to> <impedance> <flow_limit>
// '#' starts a comment line.
Grid load_grid(std::istream& in);
void save_grid(const Grid& grid, std::ostream& out);
Grid load_grid_file(const std::filesystem::path& path);
void save_grid_file(const Grid& grid, const std::filesystem::path& path);

struct SyntheticGridParams {
  int nodes = 400;
  int generators = 60;
  int lines = 617;
  double mean_load = 100.0;
  /// Initial C_M = (P_G - P_D) / P_D against total base load.
  double initial_margin = 0.4;
  /// Flow limits are this multiple of the base-load power flow.
  double limit_factor = 1.25;
  /// Lines with little initial flow get at least this fraction of the
  /// mean absolute initial flow (times limit_factor) as their limit.
  double min_limit_fraction = 0.1;
};

/// Random connected grid: random spanning tree plus uniformly chosen extra
/// edges, deterministic for a given seed.
Grid generate_synthetic(const SyntheticGridParams& params, std::uint64_t seed);

}  // namespace opa
