#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsskp/rational.hpp"

namespace tsskp {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct Item {
  std::int64_t weight = 0;
  std::int64_t volume = 0;
  std::int64_t reward = 0;
  bool printable = false;
  // Present exactly when the item is printable.
  std::optional<std::int64_t> material;
  std::optional<std::int64_t> print_time;

  bool operator==(const Item&) const = default;
};

struct PrinterSpec {
  std::int64_t weight = 0;
  std::int64_t volume = 0;
  std::int64_t time_budget = 0;

  bool operator==(const PrinterSpec&) const = default;
};

struct MaterialSpec {
  std::int64_t weight = 1;  // >= 1
  std::int64_t volume = 1;  // >= 1

  bool operator==(const MaterialSpec&) const = default;
};

struct Scenario {
  Rat probability;
  std::vector<std::int64_t> demand;  // one entry per item

  bool operator==(const Scenario&) const = default;
};

struct Instance {
  std::vector<Item> items;
  PrinterSpec printer;
  MaterialSpec material;
  std::int64_t capacity_weight = 0;
  std::int64_t capacity_volume = 0;
  Rat alpha;  // printed-item quality factor in [0,1]
  std::vector<Scenario> scenarios;

  bool operator==(const Instance&) const = default;
};

// First-stage packing: item counts, printer count, units of printing material.
struct FirstStageDecision {
  std::vector<std::int64_t> item_counts;
  std::int64_t printers = 0;
  std::int64_t material_units = 0;

  bool operator==(const FirstStageDecision&) const = default;
};

// Second-stage outcome for one scenario: matched physical items plus the
// per-printer print counts. `prints` is items x printers; rows for
// non-printable items must stay zero.
struct PrintPlan {
  int scenario = 0;
  std::vector<std::int64_t> matched;
  std::vector<std::vector<std::int64_t>> prints;

  bool operator==(const PrintPlan&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationCode {
  NoScenarios,
  ProbabilityRange,
  ProbabilitySum,
  AlphaRange,
  NegativeValue,
  MissingPrintableField,
  UnexpectedPrintableField,
  MaterialUnitZero,
  DemandLength,
  CapacityWeight,
  CapacityVolume,
  MaterialWithoutPrinter,
  PlanShape,
  MatchedExceedsDecision,
  DemandExceeded,
  MaterialExceeded,
  TimeExceeded,
  PrintsNonPrintable,
};

inline const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::NoScenarios: return "no_scenarios";
    case ViolationCode::ProbabilityRange: return "probability_range";
    case ViolationCode::ProbabilitySum: return "probability_sum";
    case ViolationCode::AlphaRange: return "alpha_range";
    case ViolationCode::NegativeValue: return "negative_value";
    case ViolationCode::MissingPrintableField: return "missing_printable_field";
    case ViolationCode::UnexpectedPrintableField: return "unexpected_printable_field";
    case ViolationCode::MaterialUnitZero: return "material_unit_zero";
    case ViolationCode::DemandLength: return "demand_length";
    case ViolationCode::CapacityWeight: return "capacity_weight";
    case ViolationCode::CapacityVolume: return "capacity_volume";
    case ViolationCode::MaterialWithoutPrinter: return "material_without_printer";
    case ViolationCode::PlanShape: return "plan_shape";
    case ViolationCode::MatchedExceedsDecision: return "matched_exceeds_decision";
    case ViolationCode::DemandExceeded: return "demand_exceeded";
    case ViolationCode::MaterialExceeded: return "material_exceeded";
    case ViolationCode::TimeExceeded: return "time_exceeded";
    case ViolationCode::PrintsNonPrintable: return "prints_non_printable";
  }
  return "unknown";
}

struct Violation {
  ViolationCode code;
  std::string detail;
};

inline std::string violation_text(const Violation& v) {
  return std::string(violation_code_name(v.code)) + ": " + v.detail;
}

/// Returns every invariant violation; an empty list means the instance is valid.
inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  const auto add = [&](ViolationCode code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };

  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const Item& item = inst.items[i];
    const std::string tag = "item " + std::to_string(i);
    if (item.weight < 0) add(ViolationCode::NegativeValue, tag + " weight");
    if (item.volume < 0) add(ViolationCode::NegativeValue, tag + " volume");
    if (item.reward < 0) add(ViolationCode::NegativeValue, tag + " reward");
    if (item.printable) {
      if (!item.material) add(ViolationCode::MissingPrintableField, tag + " material");
      if (!item.print_time) add(ViolationCode::MissingPrintableField, tag + " print_time");
      if (item.material && *item.material < 0) add(ViolationCode::NegativeValue, tag + " material");
      if (item.print_time && *item.print_time < 0)
        add(ViolationCode::NegativeValue, tag + " print_time");
    } else {
      if (item.material) add(ViolationCode::UnexpectedPrintableField, tag + " material");
      if (item.print_time) add(ViolationCode::UnexpectedPrintableField, tag + " print_time");
    }
  }

  if (inst.printer.weight < 0) add(ViolationCode::NegativeValue, "printer weight");
  if (inst.printer.volume < 0) add(ViolationCode::NegativeValue, "printer volume");
  if (inst.printer.time_budget < 0) add(ViolationCode::NegativeValue, "printer time budget");
  if (inst.material.weight < 1)
    add(ViolationCode::MaterialUnitZero, "material unit weight must be >= 1");
  if (inst.material.volume < 1)
    add(ViolationCode::MaterialUnitZero, "material unit volume must be >= 1");
  if (inst.capacity_weight < 0) add(ViolationCode::NegativeValue, "capacity weight");
  if (inst.capacity_volume < 0) add(ViolationCode::NegativeValue, "capacity volume");
  if (inst.alpha < 0 || inst.alpha > 1)
    add(ViolationCode::AlphaRange, "alpha = " + rational_string(inst.alpha));

  if (inst.scenarios.empty()) {
    add(ViolationCode::NoScenarios, "at least one scenario required");
  } else {
    Rat total = 0;
    for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
      const Scenario& scen = inst.scenarios[s];
      const std::string tag = "scenario " + std::to_string(s);
      if (scen.probability < 0 || scen.probability > 1)
        add(ViolationCode::ProbabilityRange, tag + " q = " + rational_string(scen.probability));
      total += scen.probability;
      if (scen.demand.size() != inst.items.size())
        add(ViolationCode::DemandLength,
            tag + " has " + std::to_string(scen.demand.size()) + " demands, expected " +
                std::to_string(inst.items.size()));
      for (std::size_t i = 0; i < scen.demand.size(); ++i)
        if (scen.demand[i] < 0)
          add(ViolationCode::NegativeValue, tag + " demand for item " + std::to_string(i));
    }
    if (total != 1)
      add(ViolationCode::ProbabilitySum, "probabilities sum to " + rational_string(total));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared print-eligibility predicate
// ---------------------------------------------------------------------------

/// True when a unit of item `i` can be produced on a printer at all: the item
/// is printable, fits the per-printer time budget, and the budget is not zero.
/// A zero budget means no printing whatsoever, including zero-time items.
inline bool can_print(const Item& item, std::int64_t time_budget) {
  return item.printable && item.print_time && *item.print_time <= time_budget && time_budget > 0;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Componentwise min(a_i, d_i^s).
inline std::vector<std::int64_t> matched_quantities(const FirstStageDecision& decision,
                                                    const Scenario& scenario) {
  if (decision.item_counts.size() != scenario.demand.size())
    throw std::invalid_argument("matched_quantities: item count mismatch");
  std::vector<std::int64_t> out(decision.item_counts.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::min(decision.item_counts[i], scenario.demand[i]);
  return out;
}

namespace detail {

// Plan checks that do not need the first-stage decision.
inline std::vector<Violation> plan_violations(const Instance& inst, const PrintPlan& plan) {
  std::vector<Violation> out;
  const auto add = [&](ViolationCode code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };
  const std::size_t n = inst.items.size();
  if (plan.scenario < 0 || static_cast<std::size_t>(plan.scenario) >= inst.scenarios.size()) {
    add(ViolationCode::PlanShape, "scenario index " + std::to_string(plan.scenario));
    return out;
  }
  if (plan.matched.size() != n) {
    add(ViolationCode::PlanShape, "matched vector length " + std::to_string(plan.matched.size()));
    return out;
  }
  if (plan.prints.size() != n) {
    add(ViolationCode::PlanShape, "prints matrix has " + std::to_string(plan.prints.size()) +
                                      " rows, expected " + std::to_string(n));
    return out;
  }
  const std::size_t printers = plan.prints.empty() ? 0 : plan.prints.front().size();
  for (const auto& row : plan.prints)
    if (row.size() != printers) {
      add(ViolationCode::PlanShape, "ragged prints matrix");
      return out;
    }

  const Scenario& scen = inst.scenarios[static_cast<std::size_t>(plan.scenario)];
  std::vector<std::int64_t> printer_time(printers, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Item& item = inst.items[i];
    const std::string tag = "item " + std::to_string(i);
    if (plan.matched[i] < 0) add(ViolationCode::NegativeValue, tag + " matched");
    std::int64_t printed = 0;
    for (std::size_t j = 0; j < printers; ++j) {
      const std::int64_t p = plan.prints[i][j];
      if (p < 0) add(ViolationCode::NegativeValue, tag + " prints on printer " + std::to_string(j));
      printed += p;
      if (p > 0 && item.printable) printer_time[j] += *item.print_time * p;
    }
    if (printed > 0 && !item.printable) add(ViolationCode::PrintsNonPrintable, tag);
    if (plan.matched[i] + printed > scen.demand[i])
      add(ViolationCode::DemandExceeded,
          tag + ": " + std::to_string(plan.matched[i] + printed) + " > demand " +
              std::to_string(scen.demand[i]));
  }
  for (std::size_t j = 0; j < printers; ++j)
    if (printer_time[j] > inst.printer.time_budget)
      add(ViolationCode::TimeExceeded, "printer " + std::to_string(j) + " uses " +
                                           std::to_string(printer_time[j]) + " > T = " +
                                           std::to_string(inst.printer.time_budget));
  return out;
}

}  // namespace detail

/// Exact reward of one scenario's plan: sum a_i^s r_i + alpha * sum p_ij^s r_i.
inline Rat scenario_reward(const Instance& inst, const PrintPlan& plan) {
  const auto violations = detail::plan_violations(inst, plan);
  if (!violations.empty())
    throw std::invalid_argument("scenario_reward: infeasible plan: " +
                                violation_text(violations.front()));
  std::int64_t matched_reward = 0;
  std::int64_t printed_reward = 0;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    matched_reward += plan.matched[i] * inst.items[i].reward;
    for (std::int64_t p : plan.prints[i]) printed_reward += p * inst.items[i].reward;
  }
  return Rat(matched_reward) + inst.alpha * Rat(printed_reward);
}

/// First-stage feasibility: capacities and the material-implies-printer rule.
inline std::vector<Violation> check_decision_feasible(const Instance& inst,
                                                      const FirstStageDecision& decision) {
  std::vector<Violation> out;
  const auto add = [&](ViolationCode code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };
  if (decision.item_counts.size() != inst.items.size()) {
    add(ViolationCode::PlanShape, "decision has " + std::to_string(decision.item_counts.size()) +
                                      " item counts, expected " +
                                      std::to_string(inst.items.size()));
    return out;
  }
  if (decision.printers < 0) add(ViolationCode::NegativeValue, "printer count");
  if (decision.material_units < 0) add(ViolationCode::NegativeValue, "material units");
  std::int64_t weight = decision.printers * inst.printer.weight +
                        decision.material_units * inst.material.weight;
  std::int64_t volume = decision.printers * inst.printer.volume +
                        decision.material_units * inst.material.volume;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    if (decision.item_counts[i] < 0)
      add(ViolationCode::NegativeValue, "count for item " + std::to_string(i));
    weight += decision.item_counts[i] * inst.items[i].weight;
    volume += decision.item_counts[i] * inst.items[i].volume;
  }
  if (weight > inst.capacity_weight)
    add(ViolationCode::CapacityWeight,
        std::to_string(weight) + " > W = " + std::to_string(inst.capacity_weight));
  if (volume > inst.capacity_volume)
    add(ViolationCode::CapacityVolume,
        std::to_string(volume) + " > V = " + std::to_string(inst.capacity_volume));
  if (decision.material_units > 0 && decision.printers < 1)
    add(ViolationCode::MaterialWithoutPrinter,
        std::to_string(decision.material_units) + " material units with no printer");
  return out;
}

/// Verifies every second-stage constraint of `plan` against the decision.
inline std::vector<Violation> check_plan_feasible(const Instance& inst,
                                                  const FirstStageDecision& decision,
                                                  const PrintPlan& plan) {
  std::vector<Violation> out = detail::plan_violations(inst, plan);
  if (!out.empty()) return out;
  const auto add = [&](ViolationCode code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };
  if (decision.item_counts.size() != inst.items.size()) {
    add(ViolationCode::PlanShape, "decision item count mismatch");
    return out;
  }
  const std::size_t printers = plan.prints.empty() ? 0 : plan.prints.front().size();
  if (printers > static_cast<std::size_t>(std::max<std::int64_t>(decision.printers, 0)))
    add(ViolationCode::PlanShape, "plan uses " + std::to_string(printers) + " printers, packed " +
                                      std::to_string(decision.printers));
  std::int64_t material_used = 0;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    if (plan.matched[i] > decision.item_counts[i])
      add(ViolationCode::MatchedExceedsDecision,
          "item " + std::to_string(i) + ": " + std::to_string(plan.matched[i]) + " > a_i = " +
              std::to_string(decision.item_counts[i]));
    if (inst.items[i].printable)
      for (std::int64_t p : plan.prints[i]) material_used += p * *inst.items[i].material;
  }
  if (material_used > decision.material_units)
    add(ViolationCode::MaterialExceeded, std::to_string(material_used) + " > a_b = " +
                                             std::to_string(decision.material_units));
  return out;
}

/// Probability-weighted reward over one plan per scenario.
inline Rat expected_reward(const Instance& inst, const FirstStageDecision& decision,
                           const std::vector<PrintPlan>& plans) {
  (void)decision;
  if (plans.size() != inst.scenarios.size())
    throw std::invalid_argument("expected_reward: need one plan per scenario");
  Rat total = 0;
  for (std::size_t s = 0; s < plans.size(); ++s) {
    if (plans[s].scenario != static_cast<int>(s))
      throw std::invalid_argument("expected_reward: plan " + std::to_string(s) +
                                  " is for scenario " + std::to_string(plans[s].scenario));
    total += inst.scenarios[s].probability * scenario_reward(inst, plans[s]);
  }
  return total;
}

}  // namespace tsskp
