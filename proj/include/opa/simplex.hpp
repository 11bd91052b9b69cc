#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace opa::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x  s.t.  A x = b,  lower <= x <= upper.  A is stored by column.
class Model {
 public:
  int add_row(double rhs);
  /// Entries are (row, coefficient) pairs; rows must already exist.
  int add_column(double cost, double lower, double upper, std::span<const std::pair<int, double>> entries);

  int rows() const { return static_cast<int>(rhs_.size()); }
  int cols() const { return static_cast<int>(cost_.size()); }

  double cost(int j) const { return cost_[j]; }
  double lower(int j) const { return lower_[j]; }
  double upper(int j) const { return upper_[j]; }
  double rhs(int i) const { return rhs_[i]; }

  std::span<const int> column_rows(int j) const;
  std::span<const double> column_values(int j) const;

 private:
  friend class Simplex;
  std::vector<double> cost_, lower_, upper_, rhs_;
  std::vector<int> col_start_{0};
  std::vector<int> row_index_;
  std::vector<double> value_;
};

enum class Status : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit, Singular, NoStartingBasis };

const char* to_string(Status s);

struct Tolerances {
  double primal = 1e-9;
  double dual = 1e-9;
  double pivot = 1e-9;
};

/// Bounded-variable revised simplex with a dense explicit basis inverse.
///
/// Keeps its basis between calls. After bound or right-hand-side changes the
/// next solve() reuses the previous basis: the dual simplex repairs primal
/// infeasibility, the primal simplex repairs dual infeasibility. Variables with
/// two infinite bounds sit at zero while nonbasic.
class Simplex {
 public:
  explicit Simplex(Model model, Tolerances tol = {});

  /// Installs a basis (one column per row). The columns must form a
  /// nonsingular matrix; nonbasic variables go to their bound nearest zero.
  void set_basis(std::span<const int> basic_columns);

  void set_bounds(int j, double lower, double upper);
  void set_rhs(int i, double value);

  Status solve();
  Status primal();
  Status dual();

  double value(int j) const { return x_[j]; }
  std::span<const double> values() const { return x_; }
  double objective() const;
  double reduced_cost(int j) const { return d_[j]; }
  bool is_basic(int j) const { return state_[j] == State::Basic; }

  const Model& model() const { return model_; }
  long iterations() const { return iterations_; }
  /// Row whose pivot failed in the most recent unsuccessful solve, or -1.
  int failed_row() const { return failed_row_; }

  bool primal_feasible() const;
  bool dual_feasible() const;
  /// max |b - A x| relative to max(1, max |b|).
  double residual() const;

 private:
  enum class State : std::uint8_t { Basic, AtLower, AtUpper, Free };

  void place_nonbasic(int j);
  void refactor();
  void compute_primal();
  void compute_duals();
  double column_dot_row(int j, std::span<const double> row) const;
  void ftran(int j, std::vector<double>& out) const;
  void binv_row(int r, std::vector<double>& out) const;
  void pivot(int r, int q, std::span<const double> alpha_q);
  bool flip_for_dual_feasibility();
  int choose_entering(bool bland) const;

  Model model_;
  Tolerances tol_;
  int m_ = 0;
  int n_ = 0;

  std::vector<double> x_;
  std::vector<double> d_;
  std::vector<State> state_;
  std::vector<int> head_;       // basic column per row
  std::vector<int> pos_;        // row of a basic column, -1 otherwise
  std::vector<double> binv_;    // column-major m x m
  int updates_since_refactor_ = 0;
  long iterations_ = 0;
  int failed_row_ = -1;

  // Scratch.
  std::vector<double> alpha_q_, rho_, alpha_row_, work_;
};

}  // namespace opa::lp
