#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "opa/format.hpp"
#include "opa/grid.hpp"

namespace opa {
namespace {

struct Cursor {
  std::istream& in;
  std::size_t line_no = 0;
  std::string text;

  // Next non-blank, non-comment line; false at end of input.
  bool next() {
    while (std::getline(in, text)) {
      ++line_no;
      const auto t = trim(text);
      if (t.empty() || t.front() == '#') continue;
      return true;
    }
    return false;
  }
};

double field_double(const Cursor& c, std::string_view token, const char* name) {
  auto v = parse_double(token);
  if (!v) throw GridParseError(c.line_no, name, "expected a number, got '" + std::string(token) + "'");
  return *v;
}

int field_int(const Cursor& c, std::string_view token, const char* name) {
  auto v = parse_int<int>(token);
  if (!v) throw GridParseError(c.line_no, name, "expected an integer, got '" + std::string(token) + "'");
  return *v;
}

void expect_keyword(const Cursor& c, std::string_view got, std::string_view want) {
  if (got != want)
    throw GridParseError(c.line_no, "record", "expected '" + std::string(want) + "', got '" + std::string(got) + "'");
}

}  // namespace

Grid load_grid(std::istream& in) {
  Cursor c{in, 0, {}};
  if (!c.next()) throw GridParseError(0, "header", "empty grid file");

  auto header = split_fields(c.text);
  if (header.size() != 4) throw GridParseError(c.line_no, "header", "expected 'nodes <n> lines <m>'");
  expect_keyword(c, header[0], "nodes");
  expect_keyword(c, header[2], "lines");
  const int n = field_int(c, header[1], "nodes");
  const int m = field_int(c, header[3], "lines");
  if (n < 1) throw GridParseError(c.line_no, "nodes", "need at least one node");
  if (m < 0) throw GridParseError(c.line_no, "lines", "line count must be >= 0");

  Grid grid;
  grid.nodes.reserve(n);
  grid.lines.reserve(m);

  for (int i = 0; i < n; ++i) {
    if (!c.next()) throw GridParseError(c.line_no, "node", "expected " + std::to_string(n) + " node rows");
    auto f = split_fields(c.text);
    if (f.size() != 5) throw GridParseError(c.line_no, "node", "expected 'node <id> <L|G> <base_load> <gen_capacity>'");
    expect_keyword(c, f[0], "node");
    Node node;
    node.id = field_int(c, f[1], "id");
    if (node.id != i) throw GridParseError(c.line_no, "id", "node ids must be 0..n-1 in order");
    if (f[2] == "L") {
      node.kind = NodeKind::Load;
    } else if (f[2] == "G") {
      node.kind = NodeKind::GeneratorLoad;
    } else {
      throw GridParseError(c.line_no, "kind", "expected L or G");
    }
    node.base_load = field_double(c, f[3], "base_load");
    node.gen_capacity = field_double(c, f[4], "gen_capacity");
    grid.nodes.push_back(node);
  }

  for (int l = 0; l < m; ++l) {
    if (!c.next()) throw GridParseError(c.line_no, "line", "expected " + std::to_string(m) + " line rows");
    auto f = split_fields(c.text);
    if (f.size() != 6)
      throw GridParseError(c.line_no, "line", "expected 'line <id> <from> <to> <impedance> <flow_limit>'");
    expect_keyword(c, f[0], "line");
    Line line;
    line.id = field_int(c, f[1], "id");
    if (line.id != l) throw GridParseError(c.line_no, "id", "line ids must be 0..m-1 in order");
    line.from = field_int(c, f[2], "from");
    line.to = field_int(c, f[3], "to");
    line.impedance = field_double(c, f[4], "impedance");
    line.flow_limit = field_double(c, f[5], "flow_limit");
    grid.lines.push_back(line);
  }

  if (c.next()) throw GridParseError(c.line_no, "record", "unexpected content after " + std::to_string(m) + " lines");

  grid.validate();
  return grid;
}

void save_grid(const Grid& grid, std::ostream& out) {
  out << "nodes " << grid.nodes.size() << " lines " << grid.lines.size() << '\n';
  for (const auto& node : grid.nodes) {
    out << "node " << node.id << ' ' << (node.is_generator() ? 'G' : 'L') << ' ' << format_double(node.base_load)
        << ' ' << format_double(node.gen_capacity) << '\n';
  }
  for (const auto& line : grid.lines) {
    out << "line " << line.id << ' ' << line.from << ' ' << line.to << ' ' << format_double(line.impedance) << ' '
        << format_double(line.flow_limit) << '\n';
  }
}

Grid load_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open grid file " + path.string());
  return load_grid(in);
}

void save_grid_file(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw GridError("cannot write grid file " + path.string());
  save_grid(grid, out);
  if (!out) throw GridError("write failed for " + path.string());
}

}  // namespace opa
