#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hypervol/lp.hpp"

using namespace hypervol;

TEST_CASE("simplex solves a textbook program") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6  ->  x = 4, y = 0, value 12.
  Eigen::MatrixXd a(2, 4);
  a << 1, 1, 1, 0,
       1, 3, 0, 1;
  Eigen::VectorXd b(2);
  b << 4, 6;
  Eigen::VectorXd c(4);
  c << -3, -2, 0, 0;
  LpResult res = simplex_solve(a, b, c);
  REQUIRE(res.status == LpResult::kOptimal);
  CHECK(res.value == doctest::Approx(-12.0));
  CHECK(res.x[0] == doctest::Approx(4.0));
  CHECK(res.x[1] == doctest::Approx(0.0));
}

TEST_CASE("simplex detects infeasibility and unboundedness") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 2;  // x = 1 and x = 2 at once
  LpResult res = simplex_solve(a, b, Eigen::VectorXd::Zero(1));
  CHECK(res.status == LpResult::kInfeasible);

  Eigen::MatrixXd a2(1, 2);
  a2 << 1, -1;  // x - y = 0, min -x unbounded
  Eigen::VectorXd b2(1);
  b2 << 0;
  Eigen::VectorXd c2(2);
  c2 << -1, 0;
  CHECK(simplex_solve(a2, b2, c2).status == LpResult::kUnbounded);
}

TEST_CASE("simplex handles redundant rows") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1,
       2, 2;  // second row is twice the first
  Eigen::VectorXd b(2);
  b << 1, 2;
  Eigen::VectorXd c(2);
  c << 1, 2;
  LpResult res = simplex_solve(a, b, c);
  REQUIRE(res.status == LpResult::kOptimal);
  CHECK(res.value == doctest::Approx(1.0));
}

TEST_CASE("max_margin finds the chebyshev-like center direction") {
  // Rows {e1, e2, -e1-e2 direction}: strict interior of the dual cone exists.
  Eigen::MatrixXd rows(2, 2);
  rows << 1, 0,
          0, 1;
  Eigen::VectorXd y;
  double eps = max_margin(rows, &y);
  CHECK(eps == doctest::Approx(1.0));
  CHECK(y[0] == doctest::Approx(-1.0));
  CHECK(y[1] == doctest::Approx(-1.0));
}

TEST_CASE("max_margin is zero iff no strict solution") {
  Eigen::MatrixXd rows(2, 2);
  rows << 1, 0,
          -1, 0;  // u.y <= -eps and -u.y <= -eps force eps <= 0
  CHECK(max_margin(rows) == doctest::Approx(0.0));

  Eigen::MatrixXd none(0, 3);
  CHECK(std::isinf(max_margin(none)));
}

TEST_CASE("max_margin scales with the row magnitudes") {
  Eigen::MatrixXd rows(1, 2);
  rows << 1e-6, 0;
  double eps = max_margin(rows);
  CHECK(eps == doctest::Approx(1e-6));
}

TEST_CASE("in_cone certifies membership") {
  Eigen::MatrixXd gens(2, 2);
  gens << 1, 0,
          0, 1;
  Eigen::VectorXd t(2);
  t << 2, 3;
  CHECK(in_cone(gens, t));
  t << -1, 0;
  CHECK(!in_cone(gens, t));
  t << 0, 0;
  CHECK(in_cone(gens, t));  // apex
}

TEST_CASE("in_hull certifies membership") {
  Eigen::MatrixXd v(2, 3);
  v << 0, 1, 0,
       0, 0, 1;
  Eigen::VectorXd p(2);
  p << 0.25, 0.25;
  CHECK(in_hull(v, p));
  p << 0.6, 0.6;
  CHECK(!in_hull(v, p));
  p << 0.5, 0.5;  // on the edge
  CHECK(in_hull(v, p));
}
