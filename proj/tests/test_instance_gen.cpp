#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tsskp/instance_gen.hpp"
#include "tsskp/instance_io.hpp"

using namespace tsskp;

namespace {

GenConfig desk_config() {
  GenConfig config;
  config.item_count = 8;
  config.demand_limit = 6;
  config.scenario_count = 4;
  return config;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("generation is deterministic in config and seed") {
  const GenConfig config = desk_config();
  const GenResult a = generate(config, 42);
  const GenResult b = generate(config, 42);
  CHECK(a.instance == b.instance);
  CHECK(a.trace == b.trace);
  const GenResult c = generate(config, 43);
  CHECK_FALSE(a.instance == c.instance);
}

TEST_CASE("generated instances always validate") {
  const GenConfig config = desk_config();
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const GenResult result = generate(config, seed);
    CHECK(validate_instance(result.instance).empty());
  }
}

TEST_CASE("material units are always unit sized") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = generate(desk_config(), seed).instance;
    CHECK(inst.material.weight == 1);
    CHECK(inst.material.volume == 1);
  }
}

TEST_CASE("demand respects the per-item ceiling and the global limit") {
  const GenConfig config = desk_config();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GenResult result = generate(config, seed);
    for (std::size_t i = 0; i < result.instance.items.size(); ++i) {
      CHECK(result.trace.max_demand[i] >= 1);
      CHECK(result.trace.max_demand[i] <= config.demand_limit);
      for (const Scenario& scen : result.instance.scenarios)
        CHECK(scen.demand[i] <= result.trace.max_demand[i]);
    }
  }
}

TEST_CASE("probabilities are exactly uniform") {
  const Instance inst = generate(desk_config(), 7).instance;
  Rat total = 0;
  for (const Scenario& scen : inst.scenarios) {
    CHECK(scen.probability == Rat(1, 4));
    total += scen.probability;
  }
  CHECK(total == 1);
}

TEST_CASE("adding items leaves the demand streams of shared items alone") {
  GenConfig small = desk_config();
  GenConfig large = desk_config();
  large.item_count = small.item_count + 3;
  const GenResult a = generate(small, 11);
  const GenResult b = generate(large, 11);
  for (int i = 0; i < small.item_count; ++i) {
    CHECK(a.instance.items[i] == b.instance.items[i]);
    for (int s = 0; s < small.scenario_count; ++s)
      CHECK(a.instance.scenarios[s].demand[i] == b.instance.scenarios[s].demand[i]);
  }
}

TEST_CASE("printable fraction knob produces mixed instances") {
  GenConfig config = desk_config();
  config.item_count = 40;
  config.printable_fraction = Rat(1, 2);
  const Instance inst = generate(config, 3).instance;
  int printable = 0;
  for (const Item& item : inst.items) {
    printable += item.printable;
    if (!item.printable) {
      CHECK_FALSE(item.material.has_value());
      CHECK_FALSE(item.print_time.has_value());
    }
  }
  CHECK(printable > 5);
  CHECK(printable < 35);
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("golden instances stay byte-identical across builds") {
  const GenConfig config = desk_config();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const GenResult result = generate(config, seed);
    const std::string instance_path =
        std::string(TSSKP_TEST_DIR) + "/golden/gen_seed" + std::to_string(seed) + ".json";
    const std::string trace_path =
        std::string(TSSKP_TEST_DIR) + "/golden/gen_seed" + std::to_string(seed) + ".trace.json";
    CHECK(instance_to_json(result.instance).dump(2) + "\n" == file_bytes(instance_path));
    CHECK(trace_to_json(result.trace).dump(2) + "\n" == file_bytes(trace_path));
  }
}

TEST_CASE("alpha override only touches alpha") {
  const GenResult base = generate(desk_config(), 5);
  const Instance swept = apply_sweep_override(desk_config(), base.instance, base.trace,
                                              {SweepAspect::Alpha, Rat(1)});
  CHECK(swept.alpha == 1);
  Instance expect = base.instance;
  expect.alpha = Rat(1);
  CHECK(swept == expect);
}

TEST_CASE("printer size override follows the knapsack fractions") {
  const GenResult base = generate(desk_config(), 5);
  const Instance swept = apply_sweep_override(desk_config(), base.instance, base.trace,
                                              {SweepAspect::PrinterSizeK, Rat(2)});
  CHECK(swept.printer.weight == round_half_away_i64(Rat(base.instance.capacity_weight, 2)));
  CHECK(swept.printer.volume == round_half_away_i64(Rat(base.instance.capacity_volume, 2)));

  const Instance infinite = apply_sweep_override(desk_config(), base.instance, base.trace,
                                                 {SweepAspect::PrinterSizeK, std::nullopt});
  CHECK(infinite.printer.weight == 0);
  CHECK(infinite.printer.volume == 0);
}

TEST_CASE("material efficiency override rewrites volumes and material") {
  const GenResult base = generate(desk_config(), 5);
  const Instance swept = apply_sweep_override(desk_config(), base.instance, base.trace,
                                              {SweepAspect::MaterialEfficiencyL, Rat(1)});
  for (const Item& item : swept.items) {
    CHECK(item.volume == item.weight);
    if (item.printable) CHECK(*item.material == item.weight);  // l = 1
  }
  const Instance half = apply_sweep_override(desk_config(), base.instance, base.trace,
                                             {SweepAspect::MaterialEfficiencyL, Rat(1, 2)});
  for (const Item& item : half.items)
    if (item.printable) CHECK(*item.material == round_half_away_i64(Rat(item.weight, 2)));
}

TEST_CASE("print time override scales the expected total print time") {
  const GenResult base = generate(desk_config(), 5);
  const Instance zero = apply_sweep_override(desk_config(), base.instance, base.trace,
                                             {SweepAspect::PrintTimeM, Rat(0)});
  CHECK(zero.printer.time_budget == 0);

  const Instance unconstrained = apply_sweep_override(desk_config(), base.instance, base.trace,
                                                      {SweepAspect::PrintTimeM, std::nullopt});
  std::int64_t worst = 0;
  for (const Scenario& scen : base.instance.scenarios) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < base.instance.items.size(); ++i)
      if (base.instance.items[i].printable)
        total += *base.instance.items[i].print_time * scen.demand[i];
    worst = std::max(worst, total);
  }
  CHECK(unconstrained.printer.time_budget == worst);
}

TEST_CASE("demand limit override redraws demand and pins the capacities") {
  const GenConfig config = desk_config();
  const GenResult base = generate(config, 5);
  const Instance swept = apply_sweep_override(config, base.instance, base.trace,
                                              {SweepAspect::DemandLimitD, Rat(64)});
  CHECK(swept.capacity_weight == 100000);
  CHECK(swept.capacity_volume == 100000);
  CHECK(swept.printer.time_budget == 4000);
  for (std::size_t i = 0; i < swept.items.size(); ++i) {
    CHECK(swept.items[i] == base.instance.items[i]);  // items unchanged
    for (const Scenario& scen : swept.scenarios) CHECK(scen.demand[i] <= 64);
  }
  // The same override twice is identical (trace-driven redraw).
  const Instance again = apply_sweep_override(config, base.instance, base.trace,
                                              {SweepAspect::DemandLimitD, Rat(64)});
  CHECK(swept == again);
}

TEST_CASE("override validation") {
  const GenResult base = generate(desk_config(), 5);
  CHECK_THROWS_AS(apply_sweep_override(desk_config(), base.instance, base.trace,
                                       {SweepAspect::Alpha, std::nullopt}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_sweep_override(desk_config(), base.instance, base.trace,
                                       {SweepAspect::DemandLimitD, Rat(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_sweep_override(desk_config(), base.instance, base.trace,
                                       {SweepAspect::PrinterSizeK, Rat(0)}),
                  std::invalid_argument);
}
