#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "tsskp/det_equiv.hpp"
#include "tsskp/model.hpp"
#include "tsskp/printer_bound.hpp"
#include "tsskp/rng.hpp"

namespace tsskp {

// Exhaustive reference optimizers for tiny instances. These are the ground
// truth the solver path is tested against, so they share the solver's
// variable bounds (identical search space) but nothing else.

struct OracleLimits {
  std::int64_t max_states = 100'000'000;
};

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SecondStageOpt {
  Rat value;
  PrintPlan plan;
};

struct FullOpt {
  Rat value;
  FirstStageDecision decision;
};

namespace oracle_detail {

struct Counter {
  std::int64_t used = 0;
  std::int64_t cap = 0;
  void tick(std::int64_t amount = 1) {
    used += amount;
    if (used > cap) throw OracleLimitError("oracle: enumeration exceeds state limit");
  }
};

struct StageContext {
  const Instance* inst = nullptr;
  const Scenario* scen = nullptr;
  const std::vector<std::int64_t>* item_counts = nullptr;  // a_i
  const std::vector<std::int64_t>* print_ub = nullptr;     // per item, this scenario
  std::int64_t printers = 0;                               // a_p
  std::int64_t material_budget = 0;                        // a_b
  std::vector<std::size_t> print_items;                    // items worth enumerating

  // recursion state
  std::vector<std::int64_t> assignment;       // flattened (item, printer)
  std::vector<std::int64_t> per_item_total;
  std::vector<std::int64_t> per_printer_time;
  std::int64_t material_used = 0;

  bool has_best = false;
  __int128 best_scaled = 0;  // value * denominator(alpha)
  std::vector<std::int64_t> best_assignment;
  std::int64_t alpha_num = 0, alpha_den = 1;
  Counter* counter = nullptr;

  void search(std::size_t pos) {
    counter->tick();
    if (pos == assignment.size()) {
      std::int64_t matched_reward = 0;
      std::int64_t printed_reward = 0;
      for (std::size_t i = 0; i < inst->items.size(); ++i) {
        const std::int64_t matched =
            std::min((*item_counts)[i], scen->demand[i] - per_item_total[i]);
        matched_reward += std::max<std::int64_t>(matched, 0) * inst->items[i].reward;
      }
      for (std::size_t k = 0; k < assignment.size(); ++k) {
        const std::size_t item = print_items[k / static_cast<std::size_t>(printers)];
        printed_reward += assignment[k] * inst->items[item].reward;
      }
      const __int128 scaled = static_cast<__int128>(alpha_den) * matched_reward +
                              static_cast<__int128>(alpha_num) * printed_reward;
      if (!has_best || scaled > best_scaled) {
        has_best = true;
        best_scaled = scaled;
        best_assignment = assignment;
      }
      return;
    }
    const std::size_t item = print_items[pos / static_cast<std::size_t>(printers)];
    const std::size_t printer = pos % static_cast<std::size_t>(printers);
    const Item& it = inst->items[item];
    const std::int64_t t = *it.print_time;
    const std::int64_t m = *it.material;
    for (std::int64_t count = 0; count <= (*print_ub)[item]; ++count) {
      if (per_item_total[item] + count > scen->demand[item]) break;
      if (material_used + count * m > material_budget) break;
      if (per_printer_time[printer] + count * t > inst->printer.time_budget) break;
      assignment[pos] = count;
      per_item_total[item] += count;
      per_printer_time[printer] += count * t;
      material_used += count * m;
      search(pos + 1);
      assignment[pos] = 0;
      per_item_total[item] -= count;
      per_printer_time[printer] -= count * t;
      material_used -= count * m;
    }
  }
};

inline SecondStageOpt optimize_stage(const Instance& inst, const std::vector<std::int64_t>& counts,
                                     std::int64_t printers, std::int64_t material_budget,
                                     int scenario_index, const VarBounds& bounds,
                                     Counter& counter) {
  const std::size_t n = inst.items.size();
  const Scenario& scen = inst.scenarios[static_cast<std::size_t>(scenario_index)];

  StageContext ctx;
  ctx.inst = &inst;
  ctx.scen = &scen;
  ctx.item_counts = &counts;
  ctx.print_ub = &bounds.print_ub[static_cast<std::size_t>(scenario_index)];
  ctx.printers = printers;
  ctx.material_budget = material_budget;
  ctx.counter = &counter;
  ctx.alpha_num = to_i64(BigInt(numerator(inst.alpha)));
  ctx.alpha_den = to_i64(BigInt(denominator(inst.alpha)));

  if (printers > 0)
    for (std::size_t i = 0; i < n; ++i)
      if ((*ctx.print_ub)[i] > 0 && scen.demand[i] > 0) ctx.print_items.push_back(i);

  ctx.assignment.assign(ctx.print_items.size() * static_cast<std::size_t>(printers), 0);
  ctx.per_item_total.assign(n, 0);
  ctx.per_printer_time.assign(static_cast<std::size_t>(std::max<std::int64_t>(printers, 0)), 0);
  ctx.search(0);

  SecondStageOpt out;
  out.plan.scenario = scenario_index;
  out.plan.matched.assign(n, 0);
  out.plan.prints.assign(n, std::vector<std::int64_t>(
                                static_cast<std::size_t>(std::max<std::int64_t>(printers, 0)), 0));
  std::vector<std::int64_t> totals(n, 0);
  for (std::size_t k = 0; k < ctx.best_assignment.size(); ++k) {
    const std::size_t item = ctx.print_items[k / static_cast<std::size_t>(printers)];
    const std::size_t printer = k % static_cast<std::size_t>(printers);
    out.plan.prints[item][printer] = ctx.best_assignment[k];
    totals[item] += ctx.best_assignment[k];
  }
  std::int64_t printed_reward = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.plan.matched[i] = std::max<std::int64_t>(
        std::min(counts[i], scen.demand[i] - totals[i]), 0);
    printed_reward += totals[i] * inst.items[i].reward;
  }
  std::int64_t matched_reward = 0;
  for (std::size_t i = 0; i < n; ++i) matched_reward += out.plan.matched[i] * inst.items[i].reward;
  out.value = Rat(matched_reward) + inst.alpha * Rat(printed_reward);
  return out;
}

}  // namespace oracle_detail

/// Exact optimum of Q(a, s) by exhaustive enumeration of the print counts.
inline SecondStageOpt brute_force_second_stage(const Instance& inst,
                                               const FirstStageDecision& decision,
                                               int scenario_index,
                                               const OracleLimits& limits = {}) {
  detail::require_valid(inst, "brute_force_second_stage");
  if (scenario_index < 0 || static_cast<std::size_t>(scenario_index) >= inst.scenarios.size())
    throw std::invalid_argument("brute_force_second_stage: scenario index out of range");
  if (const auto bad = check_decision_feasible(inst, decision); !bad.empty())
    throw std::invalid_argument("brute_force_second_stage: infeasible first stage: " +
                                violation_text(bad.front()));
  const VarBounds bounds = compute_variable_bounds(inst);
  oracle_detail::Counter counter{0, limits.max_states};
  return oracle_detail::optimize_stage(inst, decision.item_counts, decision.printers,
                                       decision.material_units, scenario_index, bounds, counter);
}

/// Exact two-stage optimum by enumerating every first stage within the
/// solver's variable bounds (a_p up to Z) and pricing each one with the
/// second-stage enumeration. Ties resolve to the lexicographically smallest
/// decision vector (a_1, ..., a_n, a_p, a_b).
inline FullOpt brute_force_full(const Instance& inst, const OracleLimits& limits = {}) {
  detail::require_valid(inst, "brute_force_full");
  const std::size_t n = inst.items.size();
  const VarBounds bounds = compute_variable_bounds(inst);
  const std::int64_t printer_cap = printer_upper_bound(inst).printer_cap;
  const std::int64_t material_cap = bounds.material_ub;
  oracle_detail::Counter counter{0, limits.max_states};

  // Q values are memoized per scenario on (matched caps, a_p, a_b): distinct
  // first stages often induce the same recourse problem.
  std::vector<std::map<std::vector<std::int64_t>, Rat>> memo(inst.scenarios.size());

  FullOpt best;
  best.value = -1;
  std::vector<std::int64_t> counts(n, 0);
  std::vector<std::int64_t> key(n + 2, 0);

  const auto evaluate_leaf = [&](std::int64_t weight_used, std::int64_t volume_used) {
    for (std::int64_t printers = 0; printers <= printer_cap; ++printers) {
      const std::int64_t weight_p = weight_used + printers * inst.printer.weight;
      const std::int64_t volume_p = volume_used + printers * inst.printer.volume;
      if (weight_p > inst.capacity_weight || volume_p > inst.capacity_volume) break;
      const std::int64_t material_max =
          printers == 0 ? 0
                        : std::min({material_cap,
                                    (inst.capacity_weight - weight_p) / inst.material.weight,
                                    (inst.capacity_volume - volume_p) / inst.material.volume});
      for (std::int64_t material = 0; material <= material_max; ++material) {
        counter.tick();
        Rat value = 0;
        for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
          for (std::size_t i = 0; i < n; ++i)
            key[i] = std::min(counts[i], inst.scenarios[s].demand[i]);
          key[n] = printers;
          key[n + 1] = material;
          auto& cache = memo[s];
          auto it = cache.find(key);
          if (it == cache.end()) {
            const SecondStageOpt stage = oracle_detail::optimize_stage(
                inst, counts, printers, material, static_cast<int>(s), bounds, counter);
            it = cache.emplace(key, stage.value).first;
          }
          value += inst.scenarios[s].probability * it->second;
        }
        if (value > best.value) {
          best.value = value;
          best.decision = {counts, printers, material};
        }
      }
    }
  };

  const auto enumerate_items = [&](auto&& self, std::size_t i, std::int64_t weight_used,
                                   std::int64_t volume_used) -> void {
    if (i == n) {
      evaluate_leaf(weight_used, volume_used);
      return;
    }
    const Item& item = inst.items[i];
    for (std::int64_t c = 0; c <= bounds.item_ub[i]; ++c) {
      const std::int64_t w = weight_used + c * item.weight;
      const std::int64_t v = volume_used + c * item.volume;
      if (w > inst.capacity_weight || v > inst.capacity_volume) break;
      counts[i] = c;
      self(self, i + 1, w, v);
    }
    counts[i] = 0;
  };
  enumerate_items(enumerate_items, 0, 0, 0);

  if (best.value < 0) throw std::logic_error("brute_force_full: no feasible decision");
  return best;
}

// ---------------------------------------------------------------------------
// Tiny random instances for solver-versus-oracle cross checks
// ---------------------------------------------------------------------------

struct TinyConfig {
  int max_items = 4;
  int max_scenarios = 3;
  int max_demand = 3;
  std::int64_t state_budget = 2'000'000;  // upper estimate of oracle work
};

namespace oracle_detail {

inline std::int64_t capped_mul(std::int64_t a, std::int64_t b, std::int64_t cap) {
  if (a > cap / std::max<std::int64_t>(b, 1)) return cap + 1;
  return a * b;
}

inline std::int64_t enumeration_estimate(const Instance& inst, std::int64_t cap) {
  const VarBounds bounds = compute_variable_bounds(inst);
  const std::int64_t printer_cap = printer_upper_bound(inst).printer_cap;
  std::int64_t first = 1;
  for (std::int64_t ub : bounds.item_ub) first = capped_mul(first, ub + 1, cap);
  first = capped_mul(first, printer_cap + 1, cap);
  first = capped_mul(first, bounds.material_ub + 1, cap);
  if (first > cap) return first;
  std::int64_t stage_total = 0;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    std::int64_t states = 1;
    for (std::size_t i = 0; i < inst.items.size(); ++i)
      for (std::int64_t j = 0; j < printer_cap; ++j)
        states = capped_mul(states, bounds.print_ub[s][i] + 1, cap);
    stage_total += states;
    if (stage_total > cap) return cap + 1;
  }
  return capped_mul(first, std::max<std::int64_t>(stage_total, 1), cap);
}

}  // namespace oracle_detail

/// Deterministic small instance whose full enumeration fits the state budget.
/// Covers the awkward corners on purpose: zero weights and volumes, zero
/// print times, unprintable items, non-uniform probabilities, alpha = 0 and 1.
inline Instance random_tiny_instance(const TinyConfig& config, std::uint64_t seed) {
  static const Rat kAlphas[] = {Rat(0), Rat(1), Rat(1, 2), Rat(4, 5), Rat(1, 4), Rat(3, 10)};
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng = derive_stream(seed, 0x7131, attempt);
    Instance inst;
    const int n = static_cast<int>(uniform_int(rng, 1, config.max_items));
    const int n_scen = static_cast<int>(uniform_int(rng, 1, config.max_scenarios));
    for (int i = 0; i < n; ++i) {
      Item item;
      item.weight = uniform_int(rng, 0, 5);
      item.volume = uniform_int(rng, 0, 5);
      item.reward = uniform_int(rng, 0, 8);
      item.printable = uniform_int(rng, 0, 99) < 70;
      if (item.printable) {
        item.print_time = uniform_int(rng, 0, 4);
        item.material = uniform_int(rng, 0, 3);
      }
      inst.items.push_back(item);
    }
    inst.material.weight = uniform_int(rng, 1, 2);
    inst.material.volume = uniform_int(rng, 1, 2);
    inst.printer.weight = uniform_int(rng, 0, 4);
    inst.printer.volume = uniform_int(rng, 0, 4);
    inst.printer.time_budget = uniform_int(rng, 0, 6);
    inst.capacity_weight = uniform_int(rng, 0, 10);
    inst.capacity_volume = uniform_int(rng, 0, 10);
    inst.alpha = kAlphas[uniform_int(rng, 0, 5)];
    std::vector<std::int64_t> weights(static_cast<std::size_t>(n_scen));
    std::int64_t weight_sum = 0;
    for (auto& w : weights) {
      w = uniform_int(rng, 1, 4);
      weight_sum += w;
    }
    for (int s = 0; s < n_scen; ++s) {
      Scenario scen;
      scen.probability = Rat(weights[static_cast<std::size_t>(s)], weight_sum);
      for (int i = 0; i < n; ++i) scen.demand.push_back(uniform_int(rng, 0, config.max_demand));
      inst.scenarios.push_back(std::move(scen));
    }
    if (oracle_detail::enumeration_estimate(inst, config.state_budget) <= config.state_budget)
      return inst;
  }
}

}  // namespace tsskp
