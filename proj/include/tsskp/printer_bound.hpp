#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "tsskp/model.hpp"

namespace tsskp {

// Printer upper bound used to size the deterministic equivalent.
struct BoundResult {
  std::vector<std::int64_t> per_scenario;         // greedy printer count per scenario
  std::int64_t max_needed = 0;                    // U = max over scenarios
  std::optional<std::int64_t> cap_weight;         // floor(W / w_p), nullopt when w_p = 0
  std::optional<std::int64_t> cap_volume;         // floor(V / v_p), nullopt when v_p = 0
  std::int64_t printer_cap = 0;                   // Z = min(cap_weight, cap_volume, U)
  std::vector<std::size_t> unprintable_items;     // printable items no printer can ever run
};

/// Greedy printer count for one scenario: demand units are assigned in item
/// index order, opening a new printer once the next unit would exceed T.
/// Units that cannot be printed at all are skipped and open no printers.
inline std::int64_t printers_needed(const Instance& inst, const Scenario& scenario) {
  const std::int64_t budget = inst.printer.time_budget;
  std::int64_t count = 0;
  std::int64_t used = 0;
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const Item& item = inst.items[i];
    std::int64_t remaining = scenario.demand[i];
    if (remaining <= 0 || !can_print(item, budget)) continue;
    const std::int64_t t = *item.print_time;
    if (count == 0) count = 1;
    while (remaining > 0) {
      const std::int64_t fits = (t == 0) ? remaining : (budget - used) / t;
      const std::int64_t placed = std::min(fits, remaining);
      used += placed * t;
      remaining -= placed;
      if (remaining > 0) {  // next unit would exceed T on this printer
        ++count;
        used = 0;
      }
    }
  }
  return count;
}

/// U over all scenarios plus the knapsack capacity caps; Z is their minimum.
/// A zero printer weight/volume leaves the corresponding cap unbounded.
inline BoundResult printer_upper_bound(const Instance& inst) {
  BoundResult out;
  out.per_scenario.reserve(inst.scenarios.size());
  for (const Scenario& scen : inst.scenarios) {
    const std::int64_t needed = printers_needed(inst, scen);
    out.per_scenario.push_back(needed);
    out.max_needed = std::max(out.max_needed, needed);
  }
  if (inst.printer.weight > 0) out.cap_weight = inst.capacity_weight / inst.printer.weight;
  if (inst.printer.volume > 0) out.cap_volume = inst.capacity_volume / inst.printer.volume;
  out.printer_cap = out.max_needed;
  if (out.cap_weight) out.printer_cap = std::min(out.printer_cap, *out.cap_weight);
  if (out.cap_volume) out.printer_cap = std::min(out.printer_cap, *out.cap_volume);

  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const Item& item = inst.items[i];
    if (!item.printable || can_print(item, inst.printer.time_budget)) continue;
    bool demanded = false;
    for (const Scenario& scen : inst.scenarios) demanded |= scen.demand[i] > 0;
    if (demanded) out.unprintable_items.push_back(i);
  }
  return out;
}

}  // namespace tsskp
