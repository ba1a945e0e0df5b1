#include "doctest.h"
#include "fixtures.hpp"
#include "tsskp/det_equiv.hpp"
#include "tsskp/mip.hpp"
#include "tsskp/oracle.hpp"
#include "tsskp/printer_bound.hpp"

using namespace tsskp;

namespace {

MipProblem toy_knapsack() {
  // max 5x + 4y + 3z, 2x + 3y + z <= 5, 4x + y + 2z <= 11, 3x + 4y + 2z <= 8
  LpProblem lp;
  const int x = lp.add_variable(5, 0, Rat(10));
  const int y = lp.add_variable(4, 0, Rat(10));
  const int z = lp.add_variable(3, 0, Rat(10));
  lp.add_row("a", {{x, Rat(2)}, {y, Rat(3)}, {z, Rat(1)}}, Relation::LessEq, 5);
  lp.add_row("b", {{x, Rat(4)}, {y, Rat(1)}, {z, Rat(2)}}, Relation::LessEq, 11);
  lp.add_row("c", {{x, Rat(3)}, {y, Rat(4)}, {z, Rat(2)}}, Relation::LessEq, 8);
  return {lp, {true, true, true}};
}

}  // namespace

TEST_CASE("relative_gap definition") {
  CHECK(relative_gap(Rat(100), Rat(100)) == 0);
  CHECK(relative_gap(Rat(100), Rat(101)) == Rat(1, 100));
  CHECK(relative_gap(Rat(-10), Rat(-9)) == Rat(1, 10));
  // Around zero the denominator floors at 1e-10.
  CHECK(relative_gap(Rat(0), Rat(1)) == Rat(BigInt(10000000000LL)));
}

TEST_CASE("integral-at-root problems branch zero times") {
  LpProblem lp;
  const int x = lp.add_variable(1, 0, Rat(7));
  lp.add_row("cap", {{x, Rat(1)}}, Relation::LessEq, 3);
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip({lp, {true}}, params);
  REQUIRE(res.status == MipStatus::OptimalWithinGap);
  CHECK(res.objective == Rat(3));
  CHECK(res.branches == 0);
  CHECK(res.nodes == 1);
  CHECK(res.gap == Rat(0));
  CHECK(res.best_bound == Rat(3));
}

TEST_CASE("branch and bound solves a small knapsack exactly") {
  MipParams params;
  params.relative_gap = 0;
  const MipResult res = solve_mip(toy_knapsack(), params);
  REQUIRE(res.status == MipStatus::OptimalWithinGap);
  CHECK(res.objective == Rat(13));  // x=1, z=3 (or x=2, z=1): both reach 13
  CHECK(res.best_bound == Rat(13));
}

TEST_CASE("infeasible problems report infeasible") {
  LpProblem lp;
  const int x = lp.add_variable(1, 0, Rat(3));
  lp.add_row("cap", {{x, Rat(1)}}, Relation::LessEq, 2);
  lp.add_row("floor", {{x, Rat(1)}}, Relation::GreaterEq, 3);  // 2 < x <= 2 impossible
  lp.rows[1].rhs = 3;
  const MipResult res = solve_mip({lp, {true}});
  CHECK(res.status == MipStatus::Infeasible);
  CHECK_FALSE(res.has_incumbent);
}

TEST_CASE("integer variables must be bounded above") {
  LpProblem lp;
  lp.add_variable(1, 0, std::nullopt);
  CHECK_THROWS_AS(solve_mip({lp, {true}}), MipError);
}

TEST_CASE("node limits stop the search with a valid bound") {
  MipParams params;
  params.relative_gap = 0;
  params.node_limit = 1;
  const MipResult res = solve_mip(toy_knapsack(), params);
  CHECK(res.status == MipStatus::NodeLimit);
  CHECK(res.nodes <= 1);
  if (res.has_incumbent) CHECK(res.best_bound >= res.objective);
}

TEST_CASE("deterministic node and incumbent accounting") {
  MipParams params;
  params.relative_gap = 0;
  const MipResult a = solve_mip(toy_knapsack(), params);
  const MipResult b = solve_mip(toy_knapsack(), params);
  CHECK(a.nodes == b.nodes);
  CHECK(a.branches == b.branches);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
}

TEST_CASE("looser gaps never take more nodes") {
  // Monotone gap property on a batch of tiny stochastic instances.
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = random_tiny_instance({}, seed);
    const DetEquivModel model = build_det_equiv(inst, printer_upper_bound(inst).printer_cap, true);
    MipParams loose, tight;
    loose.relative_gap = Rat(1, 10);       // 10%
    tight.relative_gap = Rat(1, 10000);    // 0.01%
    const MipResult coarse = solve_mip(model.problem, loose);
    const MipResult fine = solve_mip(model.problem, tight);
    CHECK(coarse.nodes <= fine.nodes);
    REQUIRE(coarse.has_incumbent);
    REQUIRE(fine.has_incumbent);
    CHECK(coarse.gap.value() <= loose.relative_gap);
    CHECK(fine.gap.value() <= tight.relative_gap);
  }
}

TEST_CASE("bounds stay valid at every reported result") {
  for (std::uint64_t seed = 30; seed <= 50; ++seed) {
    const Instance inst = random_tiny_instance({}, seed);
    const DetEquivModel model = build_det_equiv(inst, printer_upper_bound(inst).printer_cap, true);
    MipParams params;
    params.relative_gap = 0;
    const MipResult res = solve_mip(model.problem, params);
    REQUIRE(res.has_incumbent);
    CHECK(res.best_bound >= res.objective);
    CHECK(res.gap == Rat(0));
    // The root relaxation dominates the integer optimum.
    const LpOutcome root = solve_lp(model.problem.lp);
    REQUIRE(root.status == LpStatus::Optimal);
    CHECK(rat_from_double(root.objective) >= res.objective - Rat(1, 1000000));
  }
}
