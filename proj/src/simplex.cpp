#include "opa/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace opa::lp {
namespace {

constexpr int kRefactorInterval = 500;
constexpr double kResidualTol = 1e-9;
constexpr int kBlandAfterDegenerate = 50;
constexpr double kSingularPivot = 1e-12;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

int Model::add_row(double rhs) {
  rhs_.push_back(rhs);
  return static_cast<int>(rhs_.size()) - 1;
}

int Model::add_column(double cost, double lower, double upper, std::span<const std::pair<int, double>> entries) {
  if (lower > upper) throw std::invalid_argument("lp column with lower > upper");
  for (const auto& [row, v] : entries) {
    if (row < 0 || row >= rows()) throw std::out_of_range("lp column references unknown row");
    if (v == 0.0) continue;
    row_index_.push_back(row);
    value_.push_back(v);
  }
  col_start_.push_back(static_cast<int>(row_index_.size()));
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return cols() - 1;
}

std::span<const int> Model::column_rows(int j) const {
  return {row_index_.data() + col_start_[j], static_cast<std::size_t>(col_start_[j + 1] - col_start_[j])};
}

std::span<const double> Model::column_values(int j) const {
  return {value_.data() + col_start_[j], static_cast<std::size_t>(col_start_[j + 1] - col_start_[j])};
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration limit";
    case Status::Singular: return "singular basis";
    case Status::NoStartingBasis: return "basis neither primal nor dual feasible";
  }
  return "unknown";
}

Simplex::Simplex(Model model, Tolerances tol)
    : model_(std::move(model)),
      tol_(tol),
      m_(model_.rows()),
      n_(model_.cols()),
      x_(n_, 0.0),
      d_(n_, 0.0),
      state_(n_, State::AtLower),
      head_(m_, -1),
      pos_(n_, -1),
      binv_(static_cast<std::size_t>(m_) * m_, 0.0),
      alpha_q_(m_),
      rho_(m_),
      alpha_row_(n_),
      work_(m_) {}

void Simplex::place_nonbasic(int j) {
  const double lo = model_.lower_[j];
  const double hi = model_.upper_[j];
  if (finite(lo) && finite(hi)) {
    state_[j] = std::abs(lo) <= std::abs(hi) ? State::AtLower : State::AtUpper;
  } else if (finite(lo)) {
    state_[j] = State::AtLower;
  } else if (finite(hi)) {
    state_[j] = State::AtUpper;
  } else {
    state_[j] = State::Free;
  }
  x_[j] = state_[j] == State::AtLower ? lo : state_[j] == State::AtUpper ? hi : 0.0;
}

void Simplex::set_basis(std::span<const int> basic_columns) {
  if (static_cast<int>(basic_columns.size()) != m_) throw std::invalid_argument("basis size must equal row count");
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int i = 0; i < m_; ++i) {
    const int j = basic_columns[i];
    if (j < 0 || j >= n_ || pos_[j] >= 0) throw std::invalid_argument("invalid basis column");
    head_[i] = j;
    pos_[j] = i;
    state_[j] = State::Basic;
  }
  for (int j = 0; j < n_; ++j)
    if (pos_[j] < 0) place_nonbasic(j);
  refactor();
  compute_primal();
  compute_duals();
}

void Simplex::set_bounds(int j, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("lp bounds with lower > upper");
  model_.lower_[j] = lower;
  model_.upper_[j] = upper;
  if (state_[j] == State::Basic) return;
  switch (state_[j]) {
    case State::AtLower:
      if (!finite(lower)) state_[j] = finite(upper) ? State::AtUpper : State::Free;
      break;
    case State::AtUpper:
      if (!finite(upper)) state_[j] = finite(lower) ? State::AtLower : State::Free;
      break;
    case State::Free:
      if (finite(lower) || finite(upper)) place_nonbasic(j);
      break;
    case State::Basic:
      break;
  }
  x_[j] = state_[j] == State::AtLower ? lower : state_[j] == State::AtUpper ? upper : 0.0;
}

void Simplex::set_rhs(int i, double value) { model_.rhs_[i] = value; }

void Simplex::refactor() {
  // Gauss-Jordan with partial pivoting on [B | I], row-major scratch.
  std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
  std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int c = 0; c < m_; ++c) {
    const int j = head_[c];
    auto rows = model_.column_rows(j);
    auto vals = model_.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) b[static_cast<std::size_t>(rows[k]) * m_ + c] = vals[k];
  }
  for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;

  for (int k = 0; k < m_; ++k) {
    int p = k;
    double best = std::abs(b[static_cast<std::size_t>(k) * m_ + k]);
    for (int i = k + 1; i < m_; ++i) {
      const double v = std::abs(b[static_cast<std::size_t>(i) * m_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < kSingularPivot) {
      failed_row_ = k;
      throw std::runtime_error("singular basis at column " + std::to_string(k));
    }
    if (p != k) {
      std::swap_ranges(b.begin() + static_cast<std::ptrdiff_t>(p) * m_, b.begin() + static_cast<std::ptrdiff_t>(p + 1) * m_,
                       b.begin() + static_cast<std::ptrdiff_t>(k) * m_);
      std::swap_ranges(inv.begin() + static_cast<std::ptrdiff_t>(p) * m_,
                       inv.begin() + static_cast<std::ptrdiff_t>(p + 1) * m_,
                       inv.begin() + static_cast<std::ptrdiff_t>(k) * m_);
    }
    double* bk = &b[static_cast<std::size_t>(k) * m_];
    double* ik = &inv[static_cast<std::size_t>(k) * m_];
    const double piv = bk[k];
    for (int c = 0; c < m_; ++c) {
      bk[c] /= piv;
      ik[c] /= piv;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == k) continue;
      double* bi = &b[static_cast<std::size_t>(i) * m_];
      const double f = bi[k];
      if (f == 0.0) continue;
      double* ii = &inv[static_cast<std::size_t>(i) * m_];
      for (int c = k; c < m_; ++c) bi[c] -= f * bk[c];
      for (int c = 0; c < m_; ++c) ii[c] -= f * ik[c];
    }
  }
  // Column-major copy.
  for (int i = 0; i < m_; ++i)
    for (int c = 0; c < m_; ++c) binv_[static_cast<std::size_t>(c) * m_ + i] = inv[static_cast<std::size_t>(i) * m_ + c];
  updates_since_refactor_ = 0;
}

void Simplex::compute_primal() {
  std::fill(work_.begin(), work_.end(), 0.0);
  for (int i = 0; i < m_; ++i) work_[i] = model_.rhs_[i];
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::Basic || x_[j] == 0.0) continue;
    auto rows = model_.column_rows(j);
    auto vals = model_.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) work_[rows[k]] -= vals[k] * x_[j];
  }
  std::fill(alpha_q_.begin(), alpha_q_.end(), 0.0);
  for (int k = 0; k < m_; ++k) {
    const double r = work_[k];
    if (r == 0.0) continue;
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    for (int i = 0; i < m_; ++i) alpha_q_[i] += col[i] * r;
  }
  for (int i = 0; i < m_; ++i) x_[head_[i]] = alpha_q_[i];
}

void Simplex::compute_duals() {
  // y_k = c_B . binv[:, k]
  for (int k = 0; k < m_; ++k) {
    const double* col = &binv_[static_cast<std::size_t>(k) * m_];
    double y = 0.0;
    for (int i = 0; i < m_; ++i) y += model_.cost_[head_[i]] * col[i];
    work_[k] = y;
  }
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::Basic) {
      d_[j] = 0.0;
      continue;
    }
    d_[j] = model_.cost_[j] - column_dot_row(j, work_);
  }
}

double Simplex::column_dot_row(int j, std::span<const double> row) const {
  auto rows = model_.column_rows(j);
  auto vals = model_.column_values(j);
  double s = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) s += vals[k] * row[rows[k]];
  return s;
}

void Simplex::ftran(int j, std::vector<double>& out) const {
  std::fill(out.begin(), out.end(), 0.0);
  auto rows = model_.column_rows(j);
  auto vals = model_.column_values(j);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double* col = &binv_[static_cast<std::size_t>(rows[k]) * m_];
    const double v = vals[k];
    for (int i = 0; i < m_; ++i) out[i] += col[i] * v;
  }
}

void Simplex::binv_row(int r, std::vector<double>& out) const {
  for (int k = 0; k < m_; ++k) out[k] = binv_[static_cast<std::size_t>(k) * m_ + r];
}

void Simplex::pivot(int r, int q, std::span<const double> alpha_q) {
  const double piv = alpha_q[r];
  for (int k = 0; k < m_; ++k) {
    double* col = &binv_[static_cast<std::size_t>(k) * m_];
    const double v = col[r] / piv;
    if (v == 0.0) continue;
    for (int i = 0; i < m_; ++i) col[i] -= alpha_q[i] * v;
    col[r] = v;
  }
  const int leaving = head_[r];
  pos_[leaving] = -1;
  head_[r] = q;
  pos_[q] = r;
  state_[q] = State::Basic;
  ++iterations_;
  if (++updates_since_refactor_ >= kRefactorInterval) {
    refactor();
    compute_primal();
    compute_duals();
  }
}

bool Simplex::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (x_[j] < model_.lower_[j] - tol_.primal || x_[j] > model_.upper_[j] + tol_.primal) return false;
  }
  return true;
}

bool Simplex::dual_feasible() const {
  for (int j = 0; j < n_; ++j) {
    if (model_.lower_[j] == model_.upper_[j]) continue;
    switch (state_[j]) {
      case State::AtLower:
        if (d_[j] < -tol_.dual) return false;
        break;
      case State::AtUpper:
        if (d_[j] > tol_.dual) return false;
        break;
      case State::Free:
        if (std::abs(d_[j]) > tol_.dual) return false;
        break;
      case State::Basic:
        break;
    }
  }
  return true;
}

bool Simplex::flip_for_dual_feasibility() {
  bool flipped = false;
  for (int j = 0; j < n_; ++j) {
    const double lo = model_.lower_[j];
    const double hi = model_.upper_[j];
    if (!finite(lo) || !finite(hi) || lo == hi) continue;
    if (state_[j] == State::AtLower && d_[j] < -tol_.dual) {
      state_[j] = State::AtUpper;
      x_[j] = hi;
      flipped = true;
    } else if (state_[j] == State::AtUpper && d_[j] > tol_.dual) {
      state_[j] = State::AtLower;
      x_[j] = lo;
      flipped = true;
    }
  }
  return flipped;
}

int Simplex::choose_entering(bool bland) const {
  int best_j = -1;
  double best = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == State::Basic || model_.lower_[j] == model_.upper_[j]) continue;
    double score = 0.0;
    switch (state_[j]) {
      case State::AtLower: score = -d_[j]; break;
      case State::AtUpper: score = d_[j]; break;
      case State::Free: score = std::abs(d_[j]); break;
      case State::Basic: break;
    }
    if (score <= tol_.dual) continue;
    if (bland) return j;
    if (score > best) {
      best = score;
      best_j = j;
    }
  }
  return best_j;
}

Status Simplex::primal() {
  const long limit = iterations_ + 50L * (m_ + n_) + 1000;
  int degenerate = 0;
  while (true) {
    if (iterations_ > limit) return Status::IterationLimit;
    const bool bland = degenerate > kBlandAfterDegenerate;
    const int q = choose_entering(bland);
    if (q < 0) return Status::Optimal;

    const double dir = d_[q] < 0.0 ? 1.0 : -1.0;
    ftran(q, alpha_q_);
    const double lo_q = model_.lower_[q];
    const double hi_q = model_.upper_[q];
    const double t_own = finite(lo_q) && finite(hi_q) ? hi_q - lo_q : kInf;

    // Basic variable i moves by -dir * alpha_i * t.
    auto exact_ratio = [&](int i, double a) {
      const int b = head_[i];
      if (a > 0.0) return finite(model_.lower_[b]) ? std::max(0.0, (x_[b] - model_.lower_[b]) / a) : kInf;
      return finite(model_.upper_[b]) ? std::max(0.0, (model_.upper_[b] - x_[b]) / -a) : kInf;
    };

    int r = -1;
    double t = kInf;
    if (bland) {
      for (int i = 0; i < m_; ++i) {
        const double a = dir * alpha_q_[i];
        if (std::abs(a) <= tol_.pivot) continue;
        const double ratio = exact_ratio(i, a);
        if (ratio < t - 1e-12 || (ratio <= t + 1e-12 && r >= 0 && head_[i] < head_[r])) {
          t = std::min(t, ratio);
          r = i;
        }
      }
    } else {
      double t1 = kInf;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * alpha_q_[i];
        if (std::abs(a) <= tol_.pivot) continue;
        const int b = head_[i];
        if (a > 0.0 && finite(model_.lower_[b]))
          t1 = std::min(t1, (x_[b] - model_.lower_[b] + tol_.primal) / a);
        else if (a < 0.0 && finite(model_.upper_[b]))
          t1 = std::min(t1, (model_.upper_[b] - x_[b] + tol_.primal) / -a);
      }
      double best_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * alpha_q_[i];
        if (std::abs(a) <= tol_.pivot) continue;
        const double ratio = exact_ratio(i, a);
        if (ratio <= t1 && std::abs(a) > best_alpha) {
          best_alpha = std::abs(a);
          r = i;
          t = ratio;
        }
      }
    }

    if (r < 0 && !finite(t_own)) return Status::Unbounded;

    if (r < 0 || t_own <= t) {
      // Bound flip of the entering variable; the basis is unchanged.
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha_q_[i] * t_own;
      state_[q] = state_[q] == State::AtLower ? State::AtUpper : State::AtLower;
      x_[q] = state_[q] == State::AtLower ? lo_q : hi_q;
      ++iterations_;
      degenerate = 0;
      continue;
    }

    for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * alpha_q_[i] * t;
    x_[q] += dir * t;

    const int p = head_[r];
    const bool to_lower = dir * alpha_q_[r] > 0.0;
    x_[p] = to_lower ? model_.lower_[p] : model_.upper_[p];

    const double theta_d = d_[q] / alpha_q_[r];
    binv_row(r, rho_);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == State::Basic || j == q) continue;
      const double a = column_dot_row(j, rho_);
      if (a != 0.0) d_[j] -= theta_d * a;
    }
    d_[p] = -theta_d;
    d_[q] = 0.0;
    state_[p] = to_lower ? State::AtLower : State::AtUpper;

    degenerate = t < 1e-12 ? degenerate + 1 : 0;
    pivot(r, q, alpha_q_);
  }
}

Status Simplex::dual() {
  const long limit = iterations_ + 50L * (m_ + n_) + 1000;
  while (true) {
    if (iterations_ > limit) return Status::IterationLimit;

    int r = -1;
    double worst = tol_.primal;
    for (int i = 0; i < m_; ++i) {
      const int b = head_[i];
      const double below = model_.lower_[b] - x_[b];
      const double above = x_[b] - model_.upper_[b];
      const double inf = std::max(below, above);
      if (inf > worst) {
        worst = inf;
        r = i;
      }
    }
    if (r < 0) return Status::Optimal;

    const int p = head_[r];
    const bool to_lower = x_[p] < model_.lower_[p];
    binv_row(r, rho_);

    // Harris two-pass ratio test over eligible nonbasic columns.
    double t1 = kInf;
    for (int j = 0; j < n_; ++j) {
      alpha_row_[j] = 0.0;
      if (state_[j] == State::Basic) continue;
      // Fixed columns never enter but their reduced costs must stay current.
      const double a = column_dot_row(j, rho_);
      alpha_row_[j] = a;
      if (std::abs(a) <= tol_.pivot || model_.lower_[j] == model_.upper_[j]) continue;
      double dj = 0.0;
      bool eligible = false;
      switch (state_[j]) {
        case State::AtLower:
          eligible = to_lower ? a < 0.0 : a > 0.0;
          dj = std::max(d_[j], 0.0);
          break;
        case State::AtUpper:
          eligible = to_lower ? a > 0.0 : a < 0.0;
          dj = std::max(-d_[j], 0.0);
          break;
        case State::Free:
          eligible = true;
          break;
        case State::Basic:
          break;
      }
      if (eligible) t1 = std::min(t1, (dj + tol_.dual) / std::abs(a));
    }
    int q = -1;
    double best_alpha = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double a = alpha_row_[j];
      if (std::abs(a) <= tol_.pivot || state_[j] == State::Basic || model_.lower_[j] == model_.upper_[j]) continue;
      double dj = 0.0;
      bool eligible = false;
      switch (state_[j]) {
        case State::AtLower:
          eligible = to_lower ? a < 0.0 : a > 0.0;
          dj = std::max(d_[j], 0.0);
          break;
        case State::AtUpper:
          eligible = to_lower ? a > 0.0 : a < 0.0;
          dj = std::max(-d_[j], 0.0);
          break;
        case State::Free:
          eligible = true;
          break;
        case State::Basic:
          break;
      }
      if (eligible && dj / std::abs(a) <= t1 && std::abs(a) > best_alpha) {
        best_alpha = std::abs(a);
        q = j;
      }
    }
    if (q < 0) {
      failed_row_ = r;
      return Status::Infeasible;
    }

    // Clamp a wrong-signed reduced cost on the entering column to zero.
    double dq = d_[q];
    if ((state_[q] == State::AtLower && dq < 0.0) || (state_[q] == State::AtUpper && dq > 0.0) ||
        state_[q] == State::Free)
      dq = 0.0;
    const double theta_d = dq / alpha_row_[q];

    ftran(q, alpha_q_);
    if (std::abs(alpha_q_[r]) <= kSingularPivot) {
      failed_row_ = r;
      return Status::Singular;
    }
    const double target = to_lower ? model_.lower_[p] : model_.upper_[p];
    const double theta_p = (x_[p] - target) / alpha_q_[r];
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= alpha_q_[i] * theta_p;
    x_[q] += theta_p;
    x_[p] = target;

    for (int j = 0; j < n_; ++j) {
      if (state_[j] == State::Basic || j == q) continue;
      if (alpha_row_[j] != 0.0) d_[j] -= theta_d * alpha_row_[j];
    }
    d_[p] = -theta_d;
    d_[q] = 0.0;
    state_[p] = to_lower ? State::AtLower : State::AtUpper;
    pivot(r, q, alpha_q_);
  }
}

Status Simplex::solve() {
  failed_row_ = -1;
  try {
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt > 0) {
        refactor();
        compute_duals();
      }
      compute_primal();

      if (!dual_feasible() && flip_for_dual_feasibility()) compute_primal();

      if (!primal_feasible()) {
        if (!dual_feasible()) return Status::NoStartingBasis;
        const Status s = dual();
        if (s != Status::Optimal) return s;
      }
      const Status s = primal();
      if (s != Status::Optimal) return s;

      // Drift in the updated inverse shows up as a residual in A x = b.
      if (residual() <= kResidualTol) return Status::Optimal;
      compute_primal();
      if (primal_feasible() && residual() <= kResidualTol) return Status::Optimal;
    }
  } catch (const std::runtime_error&) {
    return Status::Singular;
  }
  return Status::Singular;
}

double Simplex::residual() const {
  std::vector<double> r(model_.rhs_);
  double scale = 1.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    auto rows = model_.column_rows(j);
    auto vals = model_.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) r[rows[k]] -= vals[k] * x_[j];
  }
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst / scale;
}

double Simplex::objective() const {
  double s = 0.0;
  for (int j = 0; j < n_; ++j) s += model_.cost_[j] * x_[j];
  return s;
}

}  // namespace opa::lp
