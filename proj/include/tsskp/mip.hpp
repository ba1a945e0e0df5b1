#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsskp/lp.hpp"
#include "tsskp/rational.hpp"

namespace tsskp {

// Pure integer program: an LP plus an integrality flag per variable.
struct MipProblem {
  LpProblem lp;
  std::vector<bool> integral;
};

struct MipParams {
  Rat relative_gap = Rat(1, 1000);  // 0.1%
  std::int64_t node_limit = 0;      // <= 0: unlimited
  double time_limit = 0.0;          // seconds, <= 0: unlimited
};

enum class MipStatus { OptimalWithinGap, NodeLimit, TimeLimit, Infeasible };

inline const char* mip_status_name(MipStatus status) {
  switch (status) {
    case MipStatus::OptimalWithinGap: return "optimal_within_gap";
    case MipStatus::NodeLimit: return "node_limit";
    case MipStatus::TimeLimit: return "time_limit";
    case MipStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> values;   // incumbent; integral entries are exact
  Rat objective;                // exact incumbent objective (lower bound)
  Rat best_bound;               // upper bound, >= objective when incumbent exists
  std::optional<Rat> gap;       // achieved relative gap
  std::int64_t nodes = 0;       // LP relaxations solved
  std::int64_t branches = 0;
};

class MipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (UB - LB) / max(|LB|, 1e-10), exact.
inline Rat relative_gap(const Rat& lb, const Rat& ub) {
  Rat denom = lb < 0 ? Rat(-lb) : lb;
  const Rat floor_eps(BigInt(1), BigInt(10000000000LL));
  if (denom < floor_eps) denom = floor_eps;
  return (ub - lb) / denom;
}

namespace detail {

struct BbNode {
  int parent = -1;
  int depth = 0;
  double bound_est = std::numeric_limits<double>::infinity();
  int branch_var = -1;
  double branch_bound = 0.0;
  bool branch_is_upper = false;
  long id = 0;
};

// Exact feasibility of a candidate point against the rational problem data.
inline bool exactly_feasible(const LpProblem& lp, const std::vector<Rat>& point) {
  for (int j = 0; j < lp.var_count; ++j) {
    if (point[j] < lp.lower[j]) return false;
    if (lp.upper[j] && point[j] > *lp.upper[j]) return false;
  }
  for (const LpRow& row : lp.rows) {
    Rat lhs = 0;
    for (const auto& [col, coeff] : row.coeffs) lhs += coeff * point[col];
    switch (row.rel) {
      case Relation::LessEq:
        if (lhs > row.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != row.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < row.rhs) return false;
        break;
    }
  }
  return true;
}

}  // namespace detail

/// Branch and bound over LP relaxations. Deterministic: most-fractional
/// branching with lowest-index ties, the rounded-down child first, best-bound
/// node selection after the first incumbent (depth-first plunging before).
/// Incumbents are verified and valued in exact rational arithmetic, so a
/// gap-0 solve returns the exact optimum.
inline MipResult solve_mip(const MipProblem& problem, const MipParams& params = {}) {
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kIntTol = 1e-6;
  const LpProblem& lp = problem.lp;
  if (static_cast<int>(problem.integral.size()) != lp.var_count)
    throw std::invalid_argument("solve_mip: integrality flags size mismatch");
  for (int j = 0; j < lp.var_count; ++j)
    if (problem.integral[j] && !lp.upper[j])
      throw MipError("solve_mip: integer variable " + std::to_string(j) + " has no upper bound");

  const auto started = std::chrono::steady_clock::now();
  const auto elapsed_seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  Simplex simplex(lp);

  // Root bounds; integral variables snap to the enclosed integer range.
  std::vector<double> root_lb(static_cast<std::size_t>(lp.var_count));
  std::vector<double> root_ub(static_cast<std::size_t>(lp.var_count));
  for (int j = 0; j < lp.var_count; ++j) {
    double lo = to_double(lp.lower[j]);
    double hi = lp.upper[j] ? to_double(*lp.upper[j]) : kInf;
    if (problem.integral[j]) {
      lo = std::ceil(lo - 1e-9);
      hi = std::floor(hi + 1e-9);
    }
    root_lb[j] = lo;
    root_ub[j] = hi;
  }

  std::vector<detail::BbNode> arena;
  arena.push_back({});
  std::vector<int> open = {0};

  MipResult result;
  std::optional<Rat> incumbent_obj;
  std::vector<double> incumbent_values;
  double incumbent_d = -kInf;
  const double gap_param = to_double(params.relative_gap);
  double ub_d = kInf;
  bool limit_hit = false;

  std::vector<double> lb_buf, ub_buf;
  while (!open.empty()) {
    // Bound from the open nodes; unparented estimates stay +inf.
    ub_d = incumbent_obj ? incumbent_d : -kInf;
    for (int idx : open) ub_d = std::max(ub_d, arena[idx].bound_est);
    if (incumbent_obj) {
      const double gap_now = (ub_d - incumbent_d) / std::max(std::abs(incumbent_d), 1e-10);
      if (gap_now <= gap_param) break;
    }
    if (params.node_limit > 0 && result.nodes >= params.node_limit) {
      result.status = MipStatus::NodeLimit;
      limit_hit = true;
      break;
    }
    if (params.time_limit > 0.0 && elapsed_seconds() >= params.time_limit) {
      result.status = MipStatus::TimeLimit;
      limit_hit = true;
      break;
    }

    // Node selection.
    std::size_t pick = 0;
    if (!incumbent_obj) {
      for (std::size_t k = 1; k < open.size(); ++k) {
        const detail::BbNode& a = arena[open[k]];
        const detail::BbNode& b = arena[open[pick]];
        if (a.depth > b.depth || (a.depth == b.depth && a.id < b.id)) pick = k;
      }
    } else {
      for (std::size_t k = 1; k < open.size(); ++k) {
        const detail::BbNode& a = arena[open[k]];
        const detail::BbNode& b = arena[open[pick]];
        if (a.bound_est > b.bound_est || (a.bound_est == b.bound_est && a.id < b.id)) pick = k;
      }
    }
    const int node_idx = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    const double prune_tol = 1e-9 * std::max(1.0, std::abs(incumbent_d));
    if (incumbent_obj && arena[node_idx].bound_est <= incumbent_d + prune_tol) continue;

    lb_buf = root_lb;
    ub_buf = root_ub;
    for (int walk = node_idx; walk >= 0; walk = arena[walk].parent) {
      const detail::BbNode& n = arena[walk];
      if (n.branch_var < 0) continue;
      if (n.branch_is_upper)
        ub_buf[n.branch_var] = std::min(ub_buf[n.branch_var], n.branch_bound);
      else
        lb_buf[n.branch_var] = std::max(lb_buf[n.branch_var], n.branch_bound);
    }

    const LpOutcome relax = simplex.solve_bounds(lb_buf, ub_buf);
    ++result.nodes;
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Unbounded)
      throw MipError("solve_mip: unbounded relaxation");
    if (relax.status == LpStatus::IterationLimit)
      throw MipError("solve_mip: LP iteration limit in node relaxation");

    if (incumbent_obj && relax.objective <= incumbent_d + prune_tol) continue;

    // Most-fractional branching variable, lowest index on ties.
    int branch_var = -1;
    double best_dist_to_half = 1.0;
    for (int j = 0; j < lp.var_count; ++j) {
      if (!problem.integral[j]) continue;
      const double frac = relax.values[j] - std::floor(relax.values[j]);
      if (frac <= kIntTol || frac >= 1.0 - kIntTol) continue;
      const double dist = std::abs(frac - 0.5);
      if (dist < best_dist_to_half - 1e-12) {
        best_dist_to_half = dist;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      // Integral point: verify and value it exactly.
      std::vector<Rat> exact_point(static_cast<std::size_t>(lp.var_count));
      std::vector<double> rounded(relax.values);
      for (int j = 0; j < lp.var_count; ++j) {
        if (problem.integral[j]) {
          rounded[j] = std::nearbyint(relax.values[j]);
          exact_point[j] = Rat(BigInt(static_cast<long long>(rounded[j])));
        } else {
          exact_point[j] = rat_from_double(relax.values[j]);
        }
      }
      if (!detail::exactly_feasible(lp, exact_point)) {
        // Numerically integral but not truly feasible; split on the largest
        // remaining fraction instead of accepting a wrong incumbent.
        int fallback = -1;
        double worst = 1e-12;
        for (int j = 0; j < lp.var_count; ++j) {
          if (!problem.integral[j]) continue;
          const double frac = relax.values[j] - std::floor(relax.values[j]);
          const double dist = std::min(frac, 1.0 - frac);
          if (dist > worst) {
            worst = dist;
            fallback = j;
          }
        }
        if (fallback < 0)
          throw MipError("solve_mip: integral point fails exact feasibility check");
        branch_var = fallback;
      } else {
        Rat exact_obj = 0;
        for (int j = 0; j < lp.var_count; ++j)
          if (!(lp.objective[j] == 0)) exact_obj += lp.objective[j] * exact_point[j];
        if (!incumbent_obj || exact_obj > *incumbent_obj) {
          incumbent_obj = exact_obj;
          incumbent_values = rounded;
          incumbent_d = to_double(exact_obj);
        }
        continue;
      }
    }

    ++result.branches;
    const double value = relax.values[branch_var];
    const long down_id = static_cast<long>(arena.size());
    arena.push_back({node_idx, arena[node_idx].depth + 1, relax.objective, branch_var,
                     std::floor(value), true, down_id});
    open.push_back(static_cast<int>(arena.size()) - 1);
    arena.push_back({node_idx, arena[node_idx].depth + 1, relax.objective, branch_var,
                     std::ceil(value), false, down_id + 1});
    open.push_back(static_cast<int>(arena.size()) - 1);
  }

  result.has_incumbent = incumbent_obj.has_value();
  if (incumbent_obj) {
    result.values = incumbent_values;
    result.objective = *incumbent_obj;
    if (!limit_hit && open.empty()) {
      result.best_bound = *incumbent_obj;  // tree exhausted: bound closes
    } else {
      Rat bound = rat_from_double(ub_d);
      result.best_bound = bound < *incumbent_obj ? *incumbent_obj : bound;
    }
    result.gap = relative_gap(result.objective, result.best_bound);
    if (!limit_hit) result.status = MipStatus::OptimalWithinGap;
  } else if (!limit_hit) {
    result.status = MipStatus::Infeasible;
  }
  return result;
}

}  // namespace tsskp
