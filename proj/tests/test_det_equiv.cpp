#include "doctest.h"
#include "fixtures.hpp"
#include "tsskp/det_equiv.hpp"
#include "tsskp/oracle.hpp"
#include "tsskp/printer_bound.hpp"

using namespace tsskp;

TEST_CASE("big_m on the worked example and corners") {
  CHECK(big_m(testing::example_one()).value == 4);

  Instance inst = testing::example_one();
  inst.capacity_weight = 10;
  inst.capacity_volume = 12;
  inst.material = {2, 3};
  CHECK(big_m(inst).value == 4);  // min(5, 4)

  inst.capacity_weight = 0;
  CHECK(big_m(inst).value == 0);

  inst.material = {0, 0};
  CHECK_THROWS_AS(big_m(inst), std::invalid_argument);
}

TEST_CASE("variable bounds are finite and demand-tight") {
  const Instance inst = testing::example_one();
  const VarBounds bounds = compute_variable_bounds(inst);
  CHECK(bounds.item_ub == std::vector<std::int64_t>{1, 1});
  CHECK(bounds.material_ub == 4);
  CHECK(bounds.print_ub[0] == std::vector<std::int64_t>{1, 0});
  CHECK(bounds.print_ub[1] == std::vector<std::int64_t>{0, 1});

  // Weightless, volumeless item: capped by its peak demand.
  Instance free = inst;
  free.items.push_back({0, 0, 3, false, {}, {}});
  for (Scenario& scen : free.scenarios) scen.demand.push_back(5);
  CHECK(compute_variable_bounds(free).item_ub.back() == 5);
}

TEST_CASE("example-1 deterministic equivalent solves to 1.04") {
  const Instance inst = testing::example_one();
  const BoundResult bound = printer_upper_bound(inst);
  CHECK(bound.printer_cap == 1);
  const DetEquivModel model = build_det_equiv(inst, bound.printer_cap, true);
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip(model.problem, params);
  REQUIRE(res.has_incumbent);
  CHECK(res.objective == Rat(26, 25));

  const ExtractedSolution extracted = extract_solution(inst, res, model.map);
  CHECK(extracted.first_stage == FirstStageDecision{{0, 0}, 1, 2});
  REQUIRE(extracted.plans.size() == 2);
  CHECK(extracted.plans[0].prints[0][0] == 1);  // print item 1 once in s1
  CHECK(extracted.plans[1].prints[1][0] == 1);  // print item 2 once in s2
}

TEST_CASE("forbidding printers reduces the example to physical packing") {
  const Instance inst = testing::example_one();
  const DetEquivModel model = build_det_equiv(inst, 0, false);
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip(model.problem, params);
  REQUIRE(res.has_incumbent);
  CHECK(res.objective == Rat(7, 10));  // pack item 1
}

TEST_CASE("empty demand collapses to the zero solution") {
  Instance inst = testing::example_one();
  for (Scenario& scen : inst.scenarios) scen.demand = {0, 0};
  const DetEquivModel model = build_det_equiv(inst, 1, true);
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip(model.problem, params);
  REQUIRE(res.has_incumbent);
  CHECK(res.objective == 0);
  for (double v : res.values) CHECK(v == 0.0);
}

TEST_CASE("negative printer bounds are rejected") {
  CHECK_THROWS_AS(build_det_equiv(testing::example_one(), -1, true), std::invalid_argument);
}

TEST_CASE("second stage reproduces the example recourse values") {
  const Instance inst = testing::example_one();
  const FirstStageDecision decision{{0, 0}, 1, 2};
  MipParams params;
  params.relative_gap = 0;

  const DetEquivModel s1 = build_second_stage(inst, decision, 0);
  const MipResult r1 = solve_mip(s1.problem, params);
  REQUIRE(r1.has_incumbent);
  CHECK(r1.objective == Rat(4, 5));  // 0.8

  const DetEquivModel s2 = build_second_stage(inst, decision, 1);
  const MipResult r2 = solve_mip(s2.problem, params);
  CHECK(r2.objective == Rat(8, 5));  // 1.6
}

TEST_CASE("no printers means no recourse, only matching") {
  Instance inst = testing::example_one();
  inst.scenarios[0].demand = {1, 1};
  const FirstStageDecision decision{{1, 0}, 0, 0};
  const DetEquivModel stage = build_second_stage(inst, decision, 0);
  CHECK(stage.map.printers == 0);
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip(stage.problem, params);
  CHECK(res.objective == Rat(1));  // min(a, d) * r = 1
}

TEST_CASE("second stage rejects infeasible first stages") {
  const Instance inst = testing::example_one();
  FirstStageDecision overweight{{2, 0}, 0, 0};  // 8 > W = 4
  CHECK_THROWS_AS(build_second_stage(inst, overweight, 0), std::invalid_argument);
  FirstStageDecision orphan_material{{0, 0}, 0, 2};
  CHECK_THROWS_AS(build_second_stage(inst, orphan_material, 0), std::invalid_argument);
}

TEST_CASE("evaluate_first_stage prices the three example strategies") {
  const Instance inst = testing::example_one();
  CHECK(evaluate_first_stage(inst, {{1, 0}, 0, 0}) == Rat(7, 10));   // (i)
  CHECK(evaluate_first_stage(inst, {{0, 1}, 0, 0}) == Rat(3, 5));    // (ii)
  CHECK(evaluate_first_stage(inst, {{0, 0}, 1, 2}) == Rat(26, 25));  // (iii)
  CHECK(evaluate_first_stage(inst, {{0, 0}, 0, 0}) == 0);
}

TEST_CASE("random second stages agree with the brute-force oracle") {
  for (std::uint64_t seed = 60; seed < 90; ++seed) {
    const Instance inst = random_tiny_instance({}, seed);
    const VarBounds bounds = compute_variable_bounds(inst);
    const std::int64_t cap = printer_upper_bound(inst).printer_cap;
    // A deliberately arbitrary but feasible decision: nothing packed except
    // printers and material when they fit.
    FirstStageDecision decision{std::vector<std::int64_t>(inst.items.size(), 0), 0, 0};
    if (cap > 0 && inst.printer.weight <= inst.capacity_weight &&
        inst.printer.volume <= inst.capacity_volume) {
      decision.printers = 1;
      decision.material_units =
          std::min({bounds.material_ub,
                    (inst.capacity_weight - inst.printer.weight) / inst.material.weight,
                    (inst.capacity_volume - inst.printer.volume) / inst.material.volume});
    }
    if (!check_decision_feasible(inst, decision).empty()) continue;
    for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
      const SecondStageOpt reference = brute_force_second_stage(inst, decision, static_cast<int>(s));
      const DetEquivModel stage = build_second_stage(inst, decision, static_cast<int>(s));
      MipParams params;
      params.relative_gap = 0;
      const MipResult res = solve_mip(stage.problem, params);
      REQUIRE(res.has_incumbent);
      CHECK(res.objective == reference.value);
    }
  }
}

TEST_CASE("symmetry rows and printer-bound slack never change the optimum") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Instance inst = random_tiny_instance({}, seed);
    const std::int64_t cap = printer_upper_bound(inst).printer_cap;
    MipParams params;
    params.relative_gap = 0;
    const MipResult base = solve_mip(build_det_equiv(inst, cap, true).problem, params);
    const MipResult inflated = solve_mip(build_det_equiv(inst, cap + 3, true).problem, params);
    const MipResult no_sym =
        solve_mip(build_det_equiv(inst, cap, DetEquivOptions{true, false}).problem, params);
    REQUIRE(base.has_incumbent);
    CHECK(base.objective == inflated.objective);
    CHECK(base.objective == no_sym.objective);
  }
}

TEST_CASE("allowing printers never hurts") {
  for (std::uint64_t seed = 140; seed < 170; ++seed) {
    const Instance inst = random_tiny_instance({}, seed);
    MipParams params;
    params.relative_gap = 0;
    const MipResult with = solve_mip(
        build_det_equiv(inst, printer_upper_bound(inst).printer_cap, true).problem, params);
    const MipResult without = solve_mip(build_det_equiv(inst, 0, false).problem, params);
    CHECK(with.objective >= without.objective);
  }
}

TEST_CASE("items free of time and material still need a packed printer") {
  // One free-to-print item, a printer that fits, and nothing else: the only
  // way to collect the printed reward is to pack the printer.
  Instance inst;
  inst.items = {{3, 3, 5, true, 0, 0}};
  inst.printer = {2, 2, 1};
  inst.material = {1, 1};
  inst.capacity_weight = 2;
  inst.capacity_volume = 2;
  inst.alpha = Rat(1, 2);
  inst.scenarios = {{Rat(1), {4}}};
  REQUIRE(validate_instance(inst).empty());

  const std::int64_t cap = printer_upper_bound(inst).printer_cap;
  CHECK(cap == 1);
  MipParams params;
  params.relative_gap = 0;
  const DetEquivModel model = build_det_equiv(inst, cap, true);
  const MipResult res = solve_mip(model.problem, params);
  REQUIRE(res.has_incumbent);
  // 4 prints at alpha * r = 2.5 each; the item itself never fits physically.
  CHECK(res.objective == Rat(10));
  const ExtractedSolution extracted = extract_solution(inst, res, model.map);
  CHECK(extracted.first_stage.printers == 1);
  CHECK(res.objective == brute_force_full(inst).value);

  // With no room for the printer the prints must vanish too.
  Instance cramped = inst;
  cramped.capacity_weight = 1;
  cramped.capacity_volume = 1;
  const MipResult blocked =
      solve_mip(build_det_equiv(cramped, printer_upper_bound(cramped).printer_cap, true).problem,
                params);
  REQUIRE(blocked.has_incumbent);
  CHECK(blocked.objective == 0);
  CHECK(blocked.objective == brute_force_full(cramped).value);
}

TEST_CASE("extract_solution rejects corrupted inputs") {
  const Instance inst = testing::example_one();
  const DetEquivModel model = build_det_equiv(inst, 1, true);
  MipParams params;
  params.relative_gap = 0;
  MipResult res = solve_mip(model.problem, params);
  REQUIRE(res.has_incumbent);

  MipResult no_incumbent = res;
  no_incumbent.has_incumbent = false;
  CHECK_THROWS_AS(extract_solution(inst, no_incumbent, model.map), std::invalid_argument);

  MipResult truncated = res;
  truncated.values.pop_back();
  CHECK_THROWS_AS(extract_solution(inst, truncated, model.map), std::invalid_argument);

  MipResult fractional = res;
  fractional.values[0] = 0.5;
  CHECK_THROWS_AS(extract_solution(inst, fractional, model.map), MipError);
}
