#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "lp_reference.hpp"
#include "tsskp/det_equiv.hpp"
#include "tsskp/lp.hpp"
#include "tsskp/rng.hpp"

using namespace tsskp;

namespace {

double residual_inf_norm(const LpProblem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (const LpRow& row : problem.rows) {
    double lhs = 0.0, scale = 0.0;
    for (const auto& [col, coeff] : row.coeffs) {
      lhs += to_double(coeff) * x[static_cast<std::size_t>(col)];
      scale = std::max(scale, std::abs(to_double(coeff)));
    }
    if (scale == 0.0) scale = 1.0;
    const double rhs = to_double(row.rhs);
    double violation = 0.0;
    if (row.rel == Relation::LessEq) violation = lhs - rhs;
    if (row.rel == Relation::GreaterEq) violation = rhs - lhs;
    if (row.rel == Relation::Equal) violation = std::abs(lhs - rhs);
    worst = std::max(worst, violation / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("one-variable maximization hits its bound") {
  LpProblem lp;
  const int x = lp.add_variable(1, 0, std::nullopt);
  lp.add_row("cap", {{x, Rat(1)}}, Relation::LessEq, 5);
  const LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(out.values[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("conflicting rows are infeasible") {
  LpProblem lp;
  const int x = lp.add_variable(1, 0, std::nullopt);
  const int y = lp.add_variable(1, 0, std::nullopt);
  lp.add_row("cap", {{x, Rat(1)}, {y, Rat(1)}}, Relation::LessEq, 1);
  lp.add_row("floor", {{x, Rat(1)}}, Relation::GreaterEq, 2);
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("missing bounds are detected as unbounded") {
  LpProblem lp;
  const int x = lp.add_variable(1, 0, std::nullopt);
  lp.add_row("floor", {{x, Rat(1)}}, Relation::GreaterEq, 1);
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("variable bounds work without any row") {
  LpProblem lp;
  lp.add_variable(1, 0, Rat(3));
  lp.add_variable(-1, Rat(1), Rat(2));
  const LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.values[0] == doctest::Approx(3.0));
  CHECK(out.values[1] == doctest::Approx(1.0));
}

TEST_CASE("equality rows route through the paired artificials") {
  LpProblem lp;
  const int x = lp.add_variable(2, 0, std::nullopt);
  const int y = lp.add_variable(1, 0, std::nullopt);
  lp.add_row("mix", {{x, Rat(1)}, {y, Rat(1)}}, Relation::Equal, 4);
  lp.add_row("cap", {{x, Rat(1)}}, Relation::LessEq, 3);
  const LpOutcome out = solve_lp(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(7.0).epsilon(1e-9));  // x=3, y=1
  CHECK(residual_inf_norm(lp, out.values) <= 1e-7);
}

TEST_CASE("iteration limit is reported, never silent") {
  LpProblem lp;
  for (int j = 0; j < 6; ++j) lp.add_variable(1, 0, Rat(1));
  for (int r = 0; r < 4; ++r) {
    std::vector<std::pair<int, Rat>> row;
    for (int j = 0; j < 6; ++j) row.emplace_back(j, Rat(1 + (r + j) % 3));
    lp.add_row("r" + std::to_string(r), std::move(row), Relation::LessEq, Rat(3));
  }
  SimplexOptions opts;
  opts.max_iterations = 1;
  CHECK(solve_lp(lp, opts).status == LpStatus::IterationLimit);
}

TEST_CASE("example-1 relaxation matches the exact reference") {
  const Instance inst = testing::example_one();
  const DetEquivModel model = build_det_equiv(inst, 1, true);

  const testing::ReferenceOutcome exact =
      testing::reference_solve(testing::reference_from(model.problem.lp));
  REQUIRE_FALSE(exact.unbounded);
  // Frozen from the rational reference: the relaxation is tight at 1.04.
  CHECK(exact.value == Rat(26, 25));
  CHECK(exact.value >= Rat(26, 25));  // dominates the integer optimum

  const LpOutcome out = solve_lp(model.problem.lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(std::abs(out.objective - to_double(exact.value)) <= 1e-7);
  CHECK(residual_inf_norm(model.problem.lp, out.values) <= 1e-7);
}

TEST_CASE("random knapsack-shaped LPs agree with the exact reference") {
  std::mt19937_64 rng = derive_stream(99, 3);
  int solved = 0;
  for (int round = 0; round < 400; ++round) {
    LpProblem lp;
    const int n = static_cast<int>(uniform_int(rng, 1, 5));
    const int m = static_cast<int>(uniform_int(rng, 1, 4));
    for (int j = 0; j < n; ++j) {
      const bool bounded = uniform_int(rng, 0, 3) > 0;
      lp.add_variable(Rat(uniform_int(rng, -2, 6)), 0,
                      bounded ? std::optional<Rat>(Rat(uniform_int(rng, 0, 7))) : std::nullopt);
    }
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, Rat>> row;
      for (int j = 0; j < n; ++j) {
        const std::int64_t coeff = uniform_int(rng, -2, 5);
        if (coeff != 0) row.emplace_back(j, Rat(coeff));
      }
      lp.add_row("r" + std::to_string(r), std::move(row), Relation::LessEq,
                 Rat(uniform_int(rng, 0, 12)));
    }

    const testing::ReferenceOutcome exact = testing::reference_solve(testing::reference_from(lp));
    const LpOutcome out = solve_lp(lp);
    if (exact.unbounded) {
      CHECK(out.status == LpStatus::Unbounded);
      continue;
    }
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(std::abs(out.objective - to_double(exact.value)) <=
          1e-7 * std::max(1.0, std::abs(to_double(exact.value))));
    CHECK(residual_inf_norm(lp, out.values) <= 1e-7);
    ++solved;
  }
  CHECK(solved > 200);  // the suite must mostly exercise the bounded path
}

TEST_CASE("identical problems produce identical outcomes") {
  const Instance inst = testing::example_one();
  const DetEquivModel model = build_det_equiv(inst, 1, true);
  const LpOutcome a = solve_lp(model.problem.lp);
  const LpOutcome b = solve_lp(model.problem.lp);
  REQUIRE(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  CHECK(a.objective == b.objective);  // bitwise, not approximate
  CHECK(a.values == b.values);
}

TEST_CASE("solver contexts can re-solve under tightened bounds") {
  LpProblem lp;
  const int x = lp.add_variable(3, 0, Rat(4));
  const int y = lp.add_variable(2, 0, Rat(4));
  lp.add_row("cap", {{x, Rat(1)}, {y, Rat(1)}}, Relation::LessEq, 5);
  Simplex solver(lp);
  const LpOutcome base = solver.solve();
  REQUIRE(base.status == LpStatus::Optimal);
  CHECK(base.objective == doctest::Approx(14.0));  // x=4, y=1
  const LpOutcome tightened = solver.solve_bounds({0.0, 2.0}, {2.0, 4.0});
  REQUIRE(tightened.status == LpStatus::Optimal);
  CHECK(tightened.objective == doctest::Approx(12.0));  // x=2, y=3
  const LpOutcome empty = solver.solve_bounds({3.0, 0.0}, {2.0, 4.0});
  CHECK(empty.status == LpStatus::Infeasible);
}
