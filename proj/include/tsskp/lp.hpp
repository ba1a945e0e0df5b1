#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsskp/rational.hpp"

namespace tsskp {

enum class Relation { LessEq, Equal, GreaterEq };

struct LpRow {
  std::string name;
  std::vector<std::pair<int, Rat>> coeffs;  // sparse (column, coefficient)
  Relation rel = Relation::LessEq;
  Rat rhs;
};

// A maximization LP over bounded variables. Lower bounds are finite; an
// absent upper bound means +infinity.
struct LpProblem {
  int var_count = 0;
  std::vector<Rat> objective;
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
  std::vector<LpRow> rows;

  int add_variable(Rat obj, Rat lb, std::optional<Rat> ub) {
    if (ub && *ub < lb) throw std::invalid_argument("add_variable: upper bound below lower");
    objective.push_back(std::move(obj));
    lower.push_back(std::move(lb));
    upper.push_back(std::move(ub));
    return var_count++;
  }

  void add_row(std::string name, std::vector<std::pair<int, Rat>> coeffs, Relation rel, Rat rhs) {
    for (const auto& [col, coeff] : coeffs)
      if (col < 0 || col >= var_count)
        throw std::invalid_argument("add_row: column " + std::to_string(col) + " out of range");
    rows.push_back({std::move(name), std::move(coeffs), rel, std::move(rhs)});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // structural variables only
  double objective = 0.0;      // maximize sense
  long iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;   // absolute primal feasibility, after row scaling
  double opt_tol = 1e-9;    // reduced-cost optimality
  double pivot_tol = 1e-9;  // minimum eligible pivot magnitude
  int refactor_every = 100;
  int bland_after = 1000;   // consecutive degenerate pivots before Bland's rule
  long max_iterations = 0;  // 0 = derived from the problem size
};

// Two-phase primal simplex on the bounded-variable form. Each row gets a
// slack column (fixed at zero for equalities) plus a paired artificial
// (+e_r, -e_r) used only in phase 1. Deterministic pivot rules: Dantzig
// pricing with lowest-index ties, switching to Bland's rule after a run of
// degenerate pivots. The basis inverse is kept explicitly and rebuilt from a
// fresh LU every `refactor_every` pivots.
class Simplex {
 public:
  explicit Simplex(const LpProblem& problem, SimplexOptions options = {})
      : opts_(options), n_(problem.var_count), m_(static_cast<int>(problem.rows.size())) {
    if (static_cast<int>(problem.objective.size()) != n_ ||
        static_cast<int>(problem.lower.size()) != n_ ||
        static_cast<int>(problem.upper.size()) != n_)
      throw std::invalid_argument("simplex: inconsistent problem dimensions");

    cols_ = n_ + 3 * m_;  // structural | slack | artificial pairs
    slack0_ = n_;
    art0_ = n_ + m_;

    matrix_ = Eigen::MatrixXd::Zero(m_, cols_);
    rhs_ = Eigen::VectorXd::Zero(m_);
    rel_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      const LpRow& row = problem.rows[r];
      double max_abs = 0.0;
      for (const auto& [col, coeff] : row.coeffs)
        max_abs = std::max(max_abs, std::abs(to_double(coeff)));
      const double scale = max_abs > 0.0 ? 1.0 / max_abs : 1.0;
      for (const auto& [col, coeff] : row.coeffs) matrix_(r, col) += scale * to_double(coeff);
      rhs_(r) = scale * to_double(row.rhs);
      rel_[r] = row.rel;
      matrix_(r, slack0_ + r) = row.rel == Relation::GreaterEq ? -1.0 : 1.0;
      matrix_(r, art0_ + 2 * r) = 1.0;
      matrix_(r, art0_ + 2 * r + 1) = -1.0;
    }

    obj_ = Eigen::VectorXd::Zero(cols_);
    for (int j = 0; j < n_; ++j) obj_(j) = to_double(problem.objective[j]);

    def_lo_.assign(static_cast<std::size_t>(cols_), 0.0);
    def_hi_.assign(static_cast<std::size_t>(cols_), kInf);
    for (int j = 0; j < n_; ++j) {
      def_lo_[j] = to_double(problem.lower[j]);
      def_hi_[j] = problem.upper[j] ? to_double(*problem.upper[j]) : kInf;
      if (def_hi_[j] < def_lo_[j]) throw std::invalid_argument("simplex: lower bound above upper");
    }
    for (int r = 0; r < m_; ++r)
      if (problem.rows[r].rel == Relation::Equal) def_hi_[slack0_ + r] = 0.0;

    if (opts_.max_iterations <= 0) opts_.max_iterations = 10000 + 50L * (m_ + cols_);
  }

  /// Solve with the problem's own bounds.
  LpOutcome solve() {
    return solve_bounds(std::vector<double>(def_lo_.begin(), def_lo_.begin() + n_),
                        std::vector<double>(def_hi_.begin(), def_hi_.begin() + n_));
  }

  /// Solve with overridden structural bounds (used by branch and bound).
  LpOutcome solve_bounds(const std::vector<double>& lb, const std::vector<double>& ub) {
    if (static_cast<int>(lb.size()) != n_ || static_cast<int>(ub.size()) != n_)
      throw std::invalid_argument("simplex: bound vector size mismatch");
    LpOutcome out;
    for (int j = 0; j < n_; ++j)
      if (lb[j] > ub[j]) return out;  // empty box: infeasible

    lo_ = def_lo_;
    hi_ = def_hi_;
    std::copy(lb.begin(), lb.end(), lo_.begin());
    std::copy(ub.begin(), ub.end(), hi_.begin());

    state_.assign(static_cast<std::size_t>(cols_), AtLower);
    xval_.assign(static_cast<std::size_t>(cols_), 0.0);
    for (int j = 0; j < cols_; ++j) xval_[j] = lo_[j];

    // Initial basis: slack when its sign works out, artificial otherwise.
    basic_.assign(static_cast<std::size_t>(m_), -1);
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    xb_ = Eigen::VectorXd::Zero(m_);
    Eigen::VectorXd residual = rhs_;
    for (int j = 0; j < n_; ++j)
      if (xval_[j] != 0.0) residual -= matrix_.col(j) * xval_[j];
    for (int r = 0; r < m_; ++r) {
      const double rho = residual(r);
      int col;
      double sign;
      if (rel_[r] == Relation::LessEq && rho >= 0.0) {
        col = slack0_ + r;
        sign = 1.0;
      } else if (rel_[r] == Relation::GreaterEq && rho <= 0.0) {
        col = slack0_ + r;
        sign = -1.0;
      } else if (rho >= 0.0) {
        col = art0_ + 2 * r;
        sign = 1.0;
      } else {
        col = art0_ + 2 * r + 1;
        sign = -1.0;
      }
      basic_[r] = col;
      state_[col] = Basic;
      binv_(r, r) = sign;
      xb_(r) = sign * rho;
    }

    iterations_ = 0;
    pivots_since_refactor_ = 0;
    degenerate_run_ = 0;

    // Phase 1: drive the artificials to zero.
    cost_ = Eigen::VectorXd::Zero(cols_);
    for (int a = art0_; a < cols_; ++a) cost_(a) = 1.0;
    bool artificials_needed = false;
    for (int r = 0; r < m_; ++r) artificials_needed |= basic_[r] >= art0_;
    if (artificials_needed) {
      const IterStatus st = iterate();
      if (st == IterStatus::Limit) {
        out.status = LpStatus::IterationLimit;
        out.iterations = iterations_;
        return out;
      }
      if (st == IterStatus::Unbounded)
        throw std::logic_error("simplex: phase-1 objective cannot be unbounded");
      double infeasibility = 0.0;
      for (int r = 0; r < m_; ++r)
        if (basic_[r] >= art0_) infeasibility += std::abs(xb_(r));
      for (int j = art0_; j < cols_; ++j)
        if (state_[j] != Basic && xval_[j] != 0.0) infeasibility += std::abs(xval_[j]);
      if (infeasibility > opts_.feas_tol * (1.0 + m_)) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
    }
    for (int a = art0_; a < cols_; ++a) hi_[a] = 0.0;  // lock artificials out

    // Phase 2: the real objective, minimized as its negation.
    cost_ = -obj_;
    degenerate_run_ = 0;
    const IterStatus st = iterate();
    refactor();  // fresh inverse for accurate reported values
    out.iterations = iterations_;
    if (st == IterStatus::Limit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    if (st == IterStatus::Unbounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.values.resize(static_cast<std::size_t>(n_));
    double objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      out.values[static_cast<std::size_t>(j)] = value_of(j);
      objective += obj_(j) * out.values[static_cast<std::size_t>(j)];
    }
    out.objective = objective;
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  enum VarState : unsigned char { AtLower, AtUpper, Basic };
  enum class IterStatus { Optimal, Unbounded, Limit };

  double value_of(int col) const {
    if (state_[col] == Basic) {
      for (int r = 0; r < m_; ++r)
        if (basic_[r] == col) return xb_(r);
    }
    return xval_[col];
  }

  void refactor() {
    Eigen::MatrixXd basis(m_, m_);
    for (int r = 0; r < m_; ++r) basis.col(r) = matrix_.col(basic_[r]);
    binv_ = basis.partialPivLu().inverse();
    Eigen::VectorXd residual = rhs_;
    for (int j = 0; j < cols_; ++j)
      if (state_[j] != Basic && xval_[j] != 0.0) residual -= matrix_.col(j) * xval_[j];
    xb_ = binv_ * residual;
    pivots_since_refactor_ = 0;
  }

  IterStatus iterate() {
    while (true) {
      if (iterations_ >= opts_.max_iterations) return IterStatus::Limit;
      if (pivots_since_refactor_ >= opts_.refactor_every) refactor();

      // Pricing: reduced costs for every column at once.
      Eigen::VectorXd cb(m_);
      for (int r = 0; r < m_; ++r) cb(r) = cost_(basic_[r]);
      const Eigen::VectorXd y = binv_.transpose() * cb;
      const Eigen::VectorXd reduced = cost_ - matrix_.transpose() * y;

      const bool bland = degenerate_run_ >= opts_.bland_after;
      int entering = -1;
      double best_score = -opts_.opt_tol;
      for (int j = 0; j < cols_; ++j) {
        if (state_[j] == Basic || lo_[j] == hi_[j]) continue;
        double score;
        if (state_[j] == AtLower)
          score = reduced(j);
        else
          score = -reduced(j);
        if (score < -opts_.opt_tol) {
          if (bland) {
            entering = j;
            break;
          }
          if (score < best_score) {
            best_score = score;
            entering = j;
          }
        }
      }
      if (entering < 0) return IterStatus::Optimal;

      const double dir = state_[entering] == AtLower ? 1.0 : -1.0;
      const Eigen::VectorXd w = binv_ * matrix_.col(entering);

      // Bounded ratio test: the entering variable's own range competes with
      // the first basic variable to hit a bound.
      double t_limit = hi_[entering] - lo_[entering];  // may be +inf
      int leaving = -1;
      bool leaving_at_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double g = dir * w(r);
        if (std::abs(g) <= opts_.pivot_tol) continue;
        const int col = basic_[r];
        double limit;
        bool at_upper;
        if (g > 0.0) {
          limit = (xb_(r) - lo_[col]) / g;
          at_upper = false;
        } else {
          if (hi_[col] == kInf) continue;
          limit = (xb_(r) - hi_[col]) / g;
          at_upper = true;
        }
        if (limit < -1e-12) limit = 0.0;
        if (leaving < 0 ? limit < t_limit : limit < t_limit - 1e-12) {
          t_limit = limit;
          leaving = r;
          leaving_at_upper = at_upper;
        } else if (leaving >= 0 && std::abs(limit - t_limit) <= 1e-12 &&
                   basic_[r] < basic_[leaving]) {
          leaving = r;
          leaving_at_upper = at_upper;
        }
      }

      if (leaving < 0 && t_limit == kInf) return IterStatus::Unbounded;
      double step = std::max(t_limit, 0.0);

      ++iterations_;
      if (step <= 1e-12)
        ++degenerate_run_;
      else
        degenerate_run_ = 0;

      if (leaving < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        xb_ -= step * dir * w;
        state_[entering] = state_[entering] == AtLower ? AtUpper : AtLower;
        xval_[entering] = state_[entering] == AtLower ? lo_[entering] : hi_[entering];
        continue;
      }

      const double enter_value =
          (state_[entering] == AtLower ? lo_[entering] : hi_[entering]) + dir * step;
      xb_ -= step * dir * w;
      const int leaving_col = basic_[leaving];
      state_[leaving_col] = leaving_at_upper ? AtUpper : AtLower;
      xval_[leaving_col] = leaving_at_upper ? hi_[leaving_col] : lo_[leaving_col];

      // Product-form update of the explicit inverse.
      const double pivot = w(leaving);
      binv_.row(leaving) /= pivot;
      for (int r = 0; r < m_; ++r) {
        if (r == leaving) continue;
        const double factor = w(r);
        if (factor != 0.0) binv_.row(r) -= factor * binv_.row(leaving);
      }
      xb_(leaving) = enter_value;
      basic_[leaving] = entering;
      state_[entering] = Basic;
      ++pivots_since_refactor_;
    }
  }

  SimplexOptions opts_;
  int n_ = 0, m_ = 0, cols_ = 0, slack0_ = 0, art0_ = 0;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd obj_;
  std::vector<Relation> rel_;
  std::vector<double> def_lo_, def_hi_;

  // per-solve state
  Eigen::VectorXd cost_;
  std::vector<double> lo_, hi_;
  std::vector<VarState> state_;
  std::vector<double> xval_;
  std::vector<int> basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degenerate_run_ = 0;
};

inline LpOutcome solve_lp(const LpProblem& problem, const SimplexOptions& options = {}) {
  Simplex solver(problem, options);
  return solver.solve();
}

}  // namespace tsskp
