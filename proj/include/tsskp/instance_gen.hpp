#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsskp/model.hpp"
#include "tsskp/rng.hpp"

namespace tsskp {

// Uncorrelated Pisinger-style generator: weights and rewards uniform on
// [1, R], the remaining item data derived from them, capacities drawn as
// fractions of the expected total demand. Every rounding is the exact
// nearest-integer (halves away from zero) of an exact rational product, so
// instances are bit-identical for a given (config, seed) on any platform.

struct GenConfig {
  int item_count = 15;
  int demand_limit = 20;  // D
  int scenario_count = 10;
  Rat alpha = Rat(4, 5);
  std::int64_t printer_weight = 5000;
  std::int64_t printer_volume = 5000;
  int pisinger_range = 1000;  // R
  Rat printable_fraction = Rat(1);
};

enum class SweepAspect { Alpha, PrinterSizeK, MaterialEfficiencyL, PrintTimeM, DemandLimitD };

inline const char* sweep_aspect_name(SweepAspect aspect) {
  switch (aspect) {
    case SweepAspect::Alpha: return "alpha";
    case SweepAspect::PrinterSizeK: return "printer_size_k";
    case SweepAspect::MaterialEfficiencyL: return "material_efficiency_l";
    case SweepAspect::PrintTimeM: return "print_time_m";
    case SweepAspect::DemandLimitD: return "demand_limit_D";
  }
  return "unknown";
}

inline std::optional<SweepAspect> parse_sweep_aspect(const std::string& name) {
  for (SweepAspect aspect :
       {SweepAspect::Alpha, SweepAspect::PrinterSizeK, SweepAspect::MaterialEfficiencyL,
        SweepAspect::PrintTimeM, SweepAspect::DemandLimitD})
    if (name == sweep_aspect_name(aspect)) return aspect;
  return std::nullopt;
}

struct SweepOverride {
  SweepAspect aspect;
  std::optional<Rat> value;  // nullopt encodes infinity
};

// Everything needed to audit or replay a generated instance.
struct GenTrace {
  std::uint64_t seed = 0;
  std::vector<std::int64_t> max_demand;  // U_i
  std::int64_t realized_weight = 0;
  std::int64_t realized_volume = 0;
  std::int64_t realized_time = 0;

  bool operator==(const GenTrace&) const = default;
};

struct GenResult {
  Instance instance;
  GenTrace trace;
};

namespace gen_detail {

// One derived stream per draw category; growing the item count leaves the
// demand and capacity draws untouched.
constexpr std::uint64_t kItemStream = 1;
constexpr std::uint64_t kDemandStream = 2;
constexpr std::uint64_t kCapacityStream = 3;

inline std::int64_t nint(const Rat& value) { return round_half_away_i64(value); }

inline std::int64_t nint_scaled(double factor, const Rat& base) {
  return nint(rat_from_double(factor) * base);
}

inline void check_config(const GenConfig& config) {
  if (config.item_count < 1 || config.scenario_count < 1 || config.demand_limit < 1 ||
      config.pisinger_range < 1)
    throw std::invalid_argument("generate: |N|, |S|, D and R must all be >= 1");
  if (config.alpha < 0 || config.alpha > 1)
    throw std::invalid_argument("generate: alpha outside [0,1]");
  if (config.printable_fraction < 0 || config.printable_fraction > 1)
    throw std::invalid_argument("generate: printable fraction outside [0,1]");
  if (config.printer_weight < 0 || config.printer_volume < 0)
    throw std::invalid_argument("generate: negative printer size");
}

struct ItemDraw {
  Item item;
  std::int64_t max_demand = 0;
};

inline ItemDraw draw_item(const GenConfig& config, std::uint64_t seed, int index,
                          int demand_limit) {
  std::mt19937_64 rng = derive_stream(seed, kItemStream, static_cast<std::uint64_t>(index));
  ItemDraw out;
  out.item.weight = uniform_int(rng, 1, config.pisinger_range);
  out.item.reward = uniform_int(rng, 1, config.pisinger_range);
  out.item.volume = nint_scaled(uniform_real(rng, 0.2, 5.0), Rat(out.item.weight));
  const std::int64_t print_time = nint(rat_from_double(uniform_real(rng, 0.0, 10.0)));
  const std::int64_t material = nint_scaled(uniform_real(rng, 0.5, 0.9),
                                            Rat(std::min(out.item.weight, out.item.volume)));
  out.max_demand = nint(rat_from_double(uniform_real(rng, 1.0, static_cast<double>(demand_limit))));
  bool printable = true;
  if (config.printable_fraction != 1)
    printable = uniform_real(rng, 0.0, 1.0) < to_double(config.printable_fraction);
  out.item.printable = printable;
  if (printable) {
    out.item.print_time = print_time;
    out.item.material = material;
  }
  return out;
}

inline std::vector<std::int64_t> draw_demands(std::uint64_t seed, int scenario,
                                              const std::vector<std::int64_t>& max_demand) {
  std::mt19937_64 rng = derive_stream(seed, kDemandStream, static_cast<std::uint64_t>(scenario));
  std::vector<std::int64_t> out(max_demand.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = nint(rat_from_double(uniform_real(rng, 0.0, static_cast<double>(max_demand[i]))));
  return out;
}

// Probability-weighted total printing time, the base quantity for T.
inline Rat expected_print_time(const Instance& inst) {
  Rat total = 0;
  for (const Scenario& scen : inst.scenarios) {
    std::int64_t scenario_time = 0;
    for (std::size_t i = 0; i < inst.items.size(); ++i)
      if (inst.items[i].printable) scenario_time += *inst.items[i].print_time * scen.demand[i];
    total += scen.probability * Rat(scenario_time);
  }
  return total;
}

inline Rat expected_demand_weight(const Instance& inst) {
  Rat total = 0;
  for (const Scenario& scen : inst.scenarios) {
    std::int64_t scenario_weight = 0;
    for (std::size_t i = 0; i < inst.items.size(); ++i)
      scenario_weight += inst.items[i].weight * scen.demand[i];
    total += scen.probability * Rat(scenario_weight);
  }
  return total;
}

}  // namespace gen_detail

inline GenResult generate(const GenConfig& config, std::uint64_t seed) {
  gen_detail::check_config(config);
  GenResult out;
  Instance& inst = out.instance;
  out.trace.seed = seed;

  for (int i = 0; i < config.item_count; ++i) {
    const auto draw = gen_detail::draw_item(config, seed, i, config.demand_limit);
    inst.items.push_back(draw.item);
    out.trace.max_demand.push_back(draw.max_demand);
  }

  const Rat probability(1, config.scenario_count);
  for (int s = 0; s < config.scenario_count; ++s)
    inst.scenarios.push_back(
        {probability, gen_detail::draw_demands(seed, s, out.trace.max_demand)});

  inst.alpha = config.alpha;
  inst.printer.weight = config.printer_weight;
  inst.printer.volume = config.printer_volume;
  inst.material.weight = 1;
  inst.material.volume = 1;

  std::mt19937_64 rng = derive_stream(seed, gen_detail::kCapacityStream);
  const double time_factor = uniform_real(rng, 0.2, 1.0);
  const double weight_factor = uniform_real(rng, 0.5, 1.0);
  const double volume_factor = uniform_real(rng, 0.5, 2.0);
  inst.printer.time_budget =
      gen_detail::nint_scaled(time_factor, gen_detail::expected_print_time(inst));
  inst.capacity_weight =
      gen_detail::nint_scaled(weight_factor, gen_detail::expected_demand_weight(inst));
  inst.capacity_volume = gen_detail::nint_scaled(volume_factor, Rat(inst.capacity_weight));

  out.trace.realized_time = inst.printer.time_budget;
  out.trace.realized_weight = inst.capacity_weight;
  out.trace.realized_volume = inst.capacity_volume;
  return out;
}

/// Rebuilds the instance with one experiment aspect changed, per the sweep
/// rules. The instance must come from `generate` with the same config and
/// trace; the demand-limit aspect replays the demand draws with the new D.
inline Instance apply_sweep_override(const GenConfig& config, const Instance& instance,
                                     const GenTrace& trace, const SweepOverride& override_) {
  Instance out = instance;
  const auto require_finite = [&]() -> const Rat& {
    if (!override_.value)
      throw std::invalid_argument("apply_sweep_override: aspect requires a finite value");
    return *override_.value;
  };
  switch (override_.aspect) {
    case SweepAspect::Alpha: {
      out.alpha = require_finite();
      return out;
    }
    case SweepAspect::PrinterSizeK: {
      if (!override_.value) {  // printers cost nothing
        out.printer.weight = 0;
        out.printer.volume = 0;
      } else {
        const Rat& k = *override_.value;
        if (k <= 0) throw std::invalid_argument("apply_sweep_override: k must be positive");
        out.printer.weight = gen_detail::nint(Rat(out.capacity_weight) / k);
        out.printer.volume = gen_detail::nint(Rat(out.capacity_volume) / k);
      }
      return out;
    }
    case SweepAspect::MaterialEfficiencyL: {
      const Rat& l = require_finite();
      if (l < 0) throw std::invalid_argument("apply_sweep_override: l must be nonnegative");
      for (Item& item : out.items) {
        item.volume = item.weight;
        if (item.printable) item.material = gen_detail::nint(l * Rat(item.weight));
      }
      out.material.weight = 1;
      out.material.volume = 1;
      return out;
    }
    case SweepAspect::PrintTimeM: {
      if (!override_.value) {
        // Unconstrained: enough time for the heaviest scenario on one printer.
        std::int64_t worst = 0;
        for (const Scenario& scen : out.scenarios) {
          std::int64_t scenario_time = 0;
          for (std::size_t i = 0; i < out.items.size(); ++i)
            if (out.items[i].printable) scenario_time += *out.items[i].print_time * scen.demand[i];
          worst = std::max(worst, scenario_time);
        }
        out.printer.time_budget = worst;
      } else {
        const Rat& m = *override_.value;
        if (m < 0) throw std::invalid_argument("apply_sweep_override: m must be nonnegative");
        out.printer.time_budget =
            gen_detail::nint(m * gen_detail::expected_print_time(out));
      }
      return out;
    }
    case SweepAspect::DemandLimitD: {
      const Rat& value = require_finite();
      if (denominator(value) != 1 || value < 1)
        throw std::invalid_argument("apply_sweep_override: D must be an integer >= 1");
      const int new_limit = static_cast<int>(to_i64(numerator(value)));
      std::vector<std::int64_t> new_max(out.items.size(), 0);
      for (std::size_t i = 0; i < out.items.size(); ++i) {
        // Same item stream, same position: skip the five item draws, then
        // redraw U_i against the new limit.
        std::mt19937_64 rng = derive_stream(trace.seed, gen_detail::kItemStream, i);
        uniform_int(rng, 1, config.pisinger_range);
        uniform_int(rng, 1, config.pisinger_range);
        uniform_real(rng, 0.2, 5.0);
        uniform_real(rng, 0.0, 10.0);
        uniform_real(rng, 0.5, 0.9);
        new_max[i] = gen_detail::nint(
            rat_from_double(uniform_real(rng, 1.0, static_cast<double>(new_limit))));
      }
      for (std::size_t s = 0; s < out.scenarios.size(); ++s)
        out.scenarios[s].demand = gen_detail::draw_demands(trace.seed, static_cast<int>(s), new_max);
      out.capacity_weight = 100000;
      out.capacity_volume = 100000;
      out.printer.time_budget = 4000;
      return out;
    }
  }
  throw std::invalid_argument("apply_sweep_override: unknown aspect");
}

}  // namespace tsskp
