#include <doctest.h>

#include "credal/lp.hpp"

using namespace credal;

TEST_CASE("basic maximization") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  LinearProgram lp;
  int x = lp.add_var(1.0), y = lp.add_var(1.0);
  lp.add_row({{x, 1.0}, {y, 2.0}}, LinearProgram::Rel::kLe, 4.0);
  lp.add_row({{x, 3.0}, {y, 1.0}}, LinearProgram::Rel::kLe, 6.0);
  LpSolution s = lp.maximize();
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(2.8));
  CHECK(s.x[x] == doctest::Approx(1.6));
  CHECK(s.x[y] == doctest::Approx(1.2));
}

TEST_CASE("equality rows and free variables") {
  // max t s.t. t <= u, t <= 1 - u, u free; optimum t = u = 1/2.
  LinearProgram lp;
  int t = lp.add_var(1.0, true), u = lp.add_var(0.0, true);
  lp.add_row({{t, 1.0}, {u, -1.0}}, LinearProgram::Rel::kLe, 0.0);
  lp.add_row({{t, 1.0}, {u, 1.0}}, LinearProgram::Rel::kLe, 1.0);
  LpSolution s = lp.maximize();
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(0.5));

  // Equality: max x s.t. x + y = 1, x <= 0.3.
  LinearProgram lp2;
  int x = lp2.add_var(1.0), y = lp2.add_var(0.0);
  lp2.add_row({{x, 1.0}, {y, 1.0}}, LinearProgram::Rel::kEq, 1.0);
  lp2.add_row({{x, 1.0}}, LinearProgram::Rel::kLe, 0.3);
  LpSolution s2 = lp2.maximize();
  REQUIRE(s2.status == LpStatus::kOptimal);
  CHECK(s2.value == doctest::Approx(0.3));
  CHECK(s2.x[y] == doctest::Approx(0.7));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram lp;
  int x = lp.add_var(1.0);
  lp.add_row({{x, 1.0}}, LinearProgram::Rel::kLe, -1.0);
  CHECK(lp.maximize().status == LpStatus::kInfeasible);

  LinearProgram lp2;
  int y = lp2.add_var(1.0);
  lp2.add_row({{y, -1.0}}, LinearProgram::Rel::kLe, 1.0);
  CHECK(lp2.maximize().status == LpStatus::kUnbounded);
}

TEST_CASE("greater-equal rows") {
  // min x + y s.t. x + y >= 2, x <= 3 -> max -(x+y).
  LinearProgram lp;
  int x = lp.add_var(-1.0), y = lp.add_var(-1.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, LinearProgram::Rel::kGe, 2.0);
  LpSolution s = lp.maximize();
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(-s.value == doctest::Approx(2.0));
}

TEST_CASE("degenerate rows are handled") {
  LinearProgram lp;
  int x = lp.add_var(1.0);
  lp.add_row({{x, 1.0}}, LinearProgram::Rel::kLe, 1.0);
  lp.add_row({{x, 1.0}}, LinearProgram::Rel::kLe, 1.0);
  lp.add_row({{x, 0.0}}, LinearProgram::Rel::kLe, 0.0);
  LpSolution s = lp.maximize();
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("deterministic across repeated solves") {
  LinearProgram lp;
  int x = lp.add_var(1.0), y = lp.add_var(2.0), z = lp.add_var(1.5, true);
  lp.add_row({{x, 1.0}, {y, 1.0}, {z, 1.0}}, LinearProgram::Rel::kLe, 2.0);
  lp.add_row({{x, 2.0}, {y, -1.0}, {z, 0.5}}, LinearProgram::Rel::kLe, 1.0);
  lp.add_row({{z, 1.0}}, LinearProgram::Rel::kGe, -3.0);
  LpSolution a = lp.maximize(), b = lp.maximize();
  REQUIRE(a.status == LpStatus::kOptimal);
  CHECK(a.value == b.value);
  CHECK(a.x == b.x);
}
