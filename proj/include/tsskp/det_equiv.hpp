#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsskp/mip.hpp"
#include "tsskp/model.hpp"

namespace tsskp {

// ---------------------------------------------------------------------------
// Big-M for the material-implies-printer row
// ---------------------------------------------------------------------------

struct BigM {
  std::int64_t value = 0;
};

/// M = min(floor(W / w_b), floor(V / v_b)); any feasible a_b is at most M.
inline BigM big_m(const Instance& inst) {
  if (inst.material.weight < 1 || inst.material.volume < 1)
    throw std::invalid_argument("big_m: material unit weight and volume must be >= 1");
  return {std::min(inst.capacity_weight / inst.material.weight,
                   inst.capacity_volume / inst.material.volume)};
}

// ---------------------------------------------------------------------------
// Finite variable bounds shared by the model builder and the oracle
// ---------------------------------------------------------------------------

struct VarBounds {
  std::vector<std::int64_t> item_ub;                 // a_i
  std::int64_t material_ub = 0;                      // a_b <= M
  std::vector<std::int64_t> max_demand;              // max_s d_i^s
  std::vector<std::vector<std::int64_t>> print_ub;   // [scenario][item], 0 when unprintable
};

inline VarBounds compute_variable_bounds(const Instance& inst) {
  VarBounds out;
  const std::size_t n = inst.items.size();
  const std::int64_t material_cap = big_m(inst).value;
  out.material_ub = material_cap;
  out.max_demand.assign(n, 0);
  for (const Scenario& scen : inst.scenarios)
    for (std::size_t i = 0; i < n; ++i)
      out.max_demand[i] = std::max(out.max_demand[i], scen.demand[i]);

  out.item_ub.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Item& item = inst.items[i];
    std::int64_t ub = out.max_demand[i];  // packing beyond peak demand never pays
    if (item.weight > 0) ub = std::min(ub, inst.capacity_weight / item.weight);
    if (item.volume > 0) ub = std::min(ub, inst.capacity_volume / item.volume);
    out.item_ub[i] = ub;
  }

  out.print_ub.assign(inst.scenarios.size(), std::vector<std::int64_t>(n, 0));
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const Item& item = inst.items[i];
      if (!can_print(item, inst.printer.time_budget)) continue;
      std::int64_t ub = inst.scenarios[s].demand[i];
      if (*item.print_time > 0) ub = std::min(ub, inst.printer.time_budget / *item.print_time);
      if (*item.material > 0) ub = std::min(ub, material_cap / *item.material);
      out.print_ub[s][i] = ub;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variable layout of a compiled model
// ---------------------------------------------------------------------------

struct VariableMap {
  std::size_t items = 0;
  std::size_t scenarios = 0;
  std::size_t printers = 0;  // Z for the deterministic equivalent, a_p for stage two
  std::vector<int> item_vars;                            // a_i (empty for stage two)
  int material_var = -1;                                 // a_b
  std::vector<int> printer_vars;                         // y_j
  std::vector<std::vector<int>> matched_vars;            // [s][i] -> a_i^s
  std::vector<std::vector<std::vector<int>>> print_vars; // [s][i][j] -> p_ij^s, -1 if absent
  std::vector<std::string> names;                        // per column
  int total = 0;
};

struct DetEquivModel {
  MipProblem problem;
  VariableMap map;
};

struct DetEquivOptions {
  bool allow_printers = true;
  bool symmetry_rows = true;  // y_j <= y_{j-1}
};

namespace detail {

inline void require_valid(const Instance& inst, const char* who) {
  const auto violations = validate_instance(inst);
  if (!violations.empty())
    throw std::invalid_argument(std::string(who) + ": invalid instance: " +
                                violation_text(violations.front()));
}

inline std::string idx1(std::size_t i) { return std::to_string(i + 1); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Deterministic equivalent of the whole two-stage problem
// ---------------------------------------------------------------------------

/// Compiles the instance into one integer program over first-stage packing
/// variables, printer indicators y_1..y_Z, and per-scenario recourse
/// variables. Items that consume neither printing time nor material get
/// explicit p <= d * y linking rows; nothing else ties their prints to a
/// packed printer.
inline DetEquivModel build_det_equiv(const Instance& inst, std::int64_t printer_cap,
                                     const DetEquivOptions& options = {}) {
  detail::require_valid(inst, "build_det_equiv");
  if (printer_cap < 0) throw std::invalid_argument("build_det_equiv: negative printer bound");

  const std::size_t n = inst.items.size();
  const std::size_t n_scen = inst.scenarios.size();
  const std::size_t n_print = static_cast<std::size_t>(printer_cap);
  const VarBounds bounds = compute_variable_bounds(inst);
  const std::int64_t big = bounds.material_ub;

  DetEquivModel model;
  LpProblem& lp = model.problem.lp;
  VariableMap& map = model.map;
  map.items = n;
  map.scenarios = n_scen;
  map.printers = n_print;

  const auto new_var = [&](Rat obj, std::int64_t lb, std::int64_t ub, std::string name) {
    const int col = lp.add_variable(std::move(obj), Rat(lb), Rat(ub));
    map.names.push_back(std::move(name));
    return col;
  };

  map.item_vars.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    map.item_vars[i] = new_var(0, 0, bounds.item_ub[i], "a_" + detail::idx1(i));
  map.material_var =
      new_var(0, 0, options.allow_printers ? bounds.material_ub : 0, "a_b");
  map.printer_vars.resize(n_print);
  for (std::size_t j = 0; j < n_print; ++j)
    map.printer_vars[j] = new_var(0, 0, options.allow_printers ? 1 : 0, "y_" + detail::idx1(j));

  map.matched_vars.assign(n_scen, std::vector<int>(n, -1));
  map.print_vars.assign(n_scen, std::vector<std::vector<int>>(n, std::vector<int>(n_print, -1)));
  for (std::size_t s = 0; s < n_scen; ++s) {
    const Rat& q = inst.scenarios[s].probability;
    for (std::size_t i = 0; i < n; ++i)
      map.matched_vars[s][i] = new_var(q * Rat(inst.items[i].reward), 0,
                                       inst.scenarios[s].demand[i],
                                       "as_" + detail::idx1(i) + "_s" + detail::idx1(s));
    for (std::size_t i = 0; i < n; ++i) {
      if (!inst.items[i].printable) continue;
      const Rat print_obj = q * inst.alpha * Rat(inst.items[i].reward);
      for (std::size_t j = 0; j < n_print; ++j)
        map.print_vars[s][i][j] =
            new_var(print_obj, 0, bounds.print_ub[s][i],
                    "p_" + detail::idx1(i) + "_" + detail::idx1(j) + "_s" + detail::idx1(s));
    }
  }
  map.total = lp.var_count;

  // Knapsack weight and volume.
  {
    std::vector<std::pair<int, Rat>> wrow, vrow;
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.items[i].weight != 0) wrow.emplace_back(map.item_vars[i], Rat(inst.items[i].weight));
      if (inst.items[i].volume != 0) vrow.emplace_back(map.item_vars[i], Rat(inst.items[i].volume));
    }
    wrow.emplace_back(map.material_var, Rat(inst.material.weight));
    vrow.emplace_back(map.material_var, Rat(inst.material.volume));
    for (std::size_t j = 0; j < n_print; ++j) {
      if (inst.printer.weight != 0)
        wrow.emplace_back(map.printer_vars[j], Rat(inst.printer.weight));
      if (inst.printer.volume != 0)
        vrow.emplace_back(map.printer_vars[j], Rat(inst.printer.volume));
    }
    lp.add_row("cap_w", std::move(wrow), Relation::LessEq, Rat(inst.capacity_weight));
    lp.add_row("cap_v", std::move(vrow), Relation::LessEq, Rat(inst.capacity_volume));
  }

  // Material only with a packed printer.
  {
    std::vector<std::pair<int, Rat>> row{{map.material_var, Rat(1)}};
    for (std::size_t j = 0; j < n_print; ++j) row.emplace_back(map.printer_vars[j], Rat(-big));
    lp.add_row("mat_link", std::move(row), Relation::LessEq, Rat(0));
  }

  for (std::size_t s = 0; s < n_scen; ++s) {
    const std::string stag = "_s" + detail::idx1(s);
    for (std::size_t i = 0; i < n; ++i) {
      // Demand: matched plus printed units cannot exceed d_i^s.
      std::vector<std::pair<int, Rat>> dem{{map.matched_vars[s][i], Rat(1)}};
      if (inst.items[i].printable)
        for (std::size_t j = 0; j < n_print; ++j)
          dem.emplace_back(map.print_vars[s][i][j], Rat(1));
      lp.add_row("dem_" + detail::idx1(i) + stag, std::move(dem), Relation::LessEq,
                 Rat(inst.scenarios[s].demand[i]));
      // Matching is limited by what was packed.
      lp.add_row("match_" + detail::idx1(i) + stag,
                 {{map.matched_vars[s][i], Rat(1)}, {map.item_vars[i], Rat(-1)}},
                 Relation::LessEq, Rat(0));
    }
    // Material budget.
    std::vector<std::pair<int, Rat>> mat;
    for (std::size_t i = 0; i < n; ++i) {
      if (!inst.items[i].printable || *inst.items[i].material == 0) continue;
      for (std::size_t j = 0; j < n_print; ++j)
        mat.emplace_back(map.print_vars[s][i][j], Rat(*inst.items[i].material));
    }
    mat.emplace_back(map.material_var, Rat(-1));
    lp.add_row("mat" + stag, std::move(mat), Relation::LessEq, Rat(0));
    // Per-printer time budget, zeroed when the printer is not packed.
    for (std::size_t j = 0; j < n_print; ++j) {
      std::vector<std::pair<int, Rat>> time;
      for (std::size_t i = 0; i < n; ++i) {
        if (!inst.items[i].printable || *inst.items[i].print_time == 0) continue;
        time.emplace_back(map.print_vars[s][i][j], Rat(*inst.items[i].print_time));
      }
      time.emplace_back(map.printer_vars[j], Rat(-inst.printer.time_budget));
      lp.add_row("time_" + detail::idx1(j) + stag, std::move(time), Relation::LessEq, Rat(0));
    }
    // Items free of both time and material are otherwise unlinked from y.
    for (std::size_t i = 0; i < n; ++i) {
      const Item& item = inst.items[i];
      if (!can_print(item, inst.printer.time_budget) || *item.print_time != 0 ||
          *item.material != 0)
        continue;
      for (std::size_t j = 0; j < n_print; ++j)
        lp.add_row("plink_" + detail::idx1(i) + "_" + detail::idx1(j) + stag,
                   {{map.print_vars[s][i][j], Rat(1)},
                    {map.printer_vars[j], Rat(-inst.scenarios[s].demand[i])}},
                   Relation::LessEq, Rat(0));
    }
  }

  if (options.symmetry_rows)
    for (std::size_t j = 1; j < n_print; ++j)
      lp.add_row("sym_" + detail::idx1(j),
                 {{map.printer_vars[j], Rat(1)}, {map.printer_vars[j - 1], Rat(-1)}},
                 Relation::LessEq, Rat(0));

  model.problem.integral.assign(static_cast<std::size_t>(lp.var_count), true);
  return model;
}

inline DetEquivModel build_det_equiv(const Instance& inst, std::int64_t printer_cap,
                                     bool allow_printers) {
  return build_det_equiv(inst, printer_cap, DetEquivOptions{allow_printers, true});
}

// ---------------------------------------------------------------------------
// Single-scenario second stage for a fixed first-stage decision
// ---------------------------------------------------------------------------

inline DetEquivModel build_second_stage(const Instance& inst, const FirstStageDecision& decision,
                                        int scenario_index) {
  detail::require_valid(inst, "build_second_stage");
  if (scenario_index < 0 || static_cast<std::size_t>(scenario_index) >= inst.scenarios.size())
    throw std::invalid_argument("build_second_stage: scenario index out of range");
  if (const auto bad = check_decision_feasible(inst, decision); !bad.empty())
    throw std::invalid_argument("build_second_stage: infeasible first stage: " +
                                violation_text(bad.front()));

  const std::size_t n = inst.items.size();
  const std::size_t n_print = static_cast<std::size_t>(decision.printers);
  const Scenario& scen = inst.scenarios[static_cast<std::size_t>(scenario_index)];
  const VarBounds bounds = compute_variable_bounds(inst);

  DetEquivModel model;
  LpProblem& lp = model.problem.lp;
  VariableMap& map = model.map;
  map.items = n;
  map.scenarios = 1;
  map.printers = n_print;

  const auto new_var = [&](Rat obj, std::int64_t ub, std::string name) {
    const int col = lp.add_variable(std::move(obj), Rat(0), Rat(ub));
    map.names.push_back(std::move(name));
    return col;
  };

  map.matched_vars.assign(1, std::vector<int>(n, -1));
  map.print_vars.assign(1, std::vector<std::vector<int>>(n, std::vector<int>(n_print, -1)));
  for (std::size_t i = 0; i < n; ++i)
    map.matched_vars[0][i] =
        new_var(Rat(inst.items[i].reward), scen.demand[i], "as_" + detail::idx1(i));
  const std::size_t sidx = static_cast<std::size_t>(scenario_index);
  for (std::size_t i = 0; i < n; ++i) {
    if (!inst.items[i].printable) continue;
    const Rat print_obj = inst.alpha * Rat(inst.items[i].reward);
    for (std::size_t j = 0; j < n_print; ++j)
      map.print_vars[0][i][j] = new_var(print_obj, bounds.print_ub[sidx][i],
                                        "p_" + detail::idx1(i) + "_" + detail::idx1(j));
  }
  map.total = lp.var_count;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<int, Rat>> dem{{map.matched_vars[0][i], Rat(1)}};
    if (inst.items[i].printable)
      for (std::size_t j = 0; j < n_print; ++j) dem.emplace_back(map.print_vars[0][i][j], Rat(1));
    lp.add_row("dem_" + detail::idx1(i), std::move(dem), Relation::LessEq, Rat(scen.demand[i]));
    lp.add_row("match_" + detail::idx1(i), {{map.matched_vars[0][i], Rat(1)}}, Relation::LessEq,
               Rat(decision.item_counts[i]));
  }
  {
    std::vector<std::pair<int, Rat>> mat;
    for (std::size_t i = 0; i < n; ++i) {
      if (!inst.items[i].printable || *inst.items[i].material == 0) continue;
      for (std::size_t j = 0; j < n_print; ++j)
        mat.emplace_back(map.print_vars[0][i][j], Rat(*inst.items[i].material));
    }
    lp.add_row("mat", std::move(mat), Relation::LessEq, Rat(decision.material_units));
  }
  for (std::size_t j = 0; j < n_print; ++j) {
    std::vector<std::pair<int, Rat>> time;
    for (std::size_t i = 0; i < n; ++i) {
      if (!inst.items[i].printable || *inst.items[i].print_time == 0) continue;
      time.emplace_back(map.print_vars[0][i][j], Rat(*inst.items[i].print_time));
    }
    lp.add_row("time_" + detail::idx1(j), std::move(time), Relation::LessEq,
               Rat(inst.printer.time_budget));
  }

  model.problem.integral.assign(static_cast<std::size_t>(lp.var_count), true);
  return model;
}

/// Expected reward of a fixed first stage: each scenario's recourse problem
/// solved to a zero gap, weighted by the scenario probabilities. Exact.
inline Rat evaluate_first_stage(const Instance& inst, const FirstStageDecision& decision,
                                const MipParams& params = {}) {
  detail::require_valid(inst, "evaluate_first_stage");
  if (const auto bad = check_decision_feasible(inst, decision); !bad.empty())
    throw std::invalid_argument("evaluate_first_stage: infeasible first stage: " +
                                violation_text(bad.front()));
  MipParams exact = params;
  exact.relative_gap = 0;
  Rat total = 0;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    DetEquivModel stage = build_second_stage(inst, decision, static_cast<int>(s));
    const MipResult res = solve_mip(stage.problem, exact);
    if (res.status != MipStatus::OptimalWithinGap || !res.has_incumbent)
      throw MipError("evaluate_first_stage: scenario " + std::to_string(s) +
                     " solve ended with status " + mip_status_name(res.status));
    total += inst.scenarios[s].probability * res.objective;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Mapping incumbents back to domain objects
// ---------------------------------------------------------------------------

struct ExtractedSolution {
  FirstStageDecision first_stage;
  std::vector<PrintPlan> plans;
};

/// Rounds an integral incumbent back into domain decisions and re-checks
/// feasibility through the model layer. Prints that sit on an unpacked
/// printer column (possible only for zero-time items) move to the first
/// packed printer.
inline ExtractedSolution extract_solution(const Instance& inst, const MipResult& result,
                                          const VariableMap& map) {
  if (!result.has_incumbent) throw std::invalid_argument("extract_solution: no incumbent");
  if (static_cast<int>(result.values.size()) != map.total ||
      map.item_vars.size() != map.items || map.matched_vars.size() != map.scenarios)
    throw std::invalid_argument("extract_solution: variable map does not match incumbent");

  const auto as_int = [&](int col) {
    const double v = result.values[static_cast<std::size_t>(col)];
    const double r = std::nearbyint(v);
    if (std::abs(v - r) > 1e-6)
      throw MipError("extract_solution: incumbent value " + std::to_string(v) +
                     " is not integral");
    return static_cast<std::int64_t>(r);
  };

  ExtractedSolution out;
  out.first_stage.item_counts.resize(map.items);
  for (std::size_t i = 0; i < map.items; ++i)
    out.first_stage.item_counts[i] = as_int(map.item_vars[i]);
  out.first_stage.material_units = map.material_var >= 0 ? as_int(map.material_var) : 0;

  std::vector<std::size_t> slot_of(map.printers, 0);
  std::int64_t packed = 0;
  for (std::size_t j = 0; j < map.printers; ++j) {
    if (as_int(map.printer_vars[j]) == 1) {
      slot_of[j] = static_cast<std::size_t>(packed);
      ++packed;
    }
  }
  out.first_stage.printers = packed;

  for (std::size_t s = 0; s < map.scenarios; ++s) {
    PrintPlan plan;
    plan.scenario = static_cast<int>(s);
    plan.matched.resize(map.items);
    plan.prints.assign(map.items, std::vector<std::int64_t>(static_cast<std::size_t>(packed), 0));
    for (std::size_t i = 0; i < map.items; ++i) {
      plan.matched[i] = as_int(map.matched_vars[s][i]);
      for (std::size_t j = 0; j < map.printers; ++j) {
        const int col = map.print_vars[s][i][j];
        if (col < 0) continue;
        const std::int64_t count = as_int(col);
        if (count == 0) continue;
        const bool packed_printer = as_int(map.printer_vars[j]) == 1;
        if (!packed_printer && packed == 0)
          throw MipError("extract_solution: prints without any packed printer");
        plan.prints[i][packed_printer ? slot_of[j] : 0] += count;
      }
    }
    out.plans.push_back(std::move(plan));
  }

  if (const auto bad = check_decision_feasible(inst, out.first_stage); !bad.empty())
    throw MipError("extract_solution: extracted first stage infeasible: " +
                   violation_text(bad.front()));
  for (const PrintPlan& plan : out.plans)
    if (const auto bad = check_plan_feasible(inst, out.first_stage, plan); !bad.empty())
      throw MipError("extract_solution: extracted plan infeasible: " +
                     violation_text(bad.front()));
  return out;
}

}  // namespace tsskp
