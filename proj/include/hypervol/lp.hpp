#pragma once

#include <Eigen/Dense>

namespace hypervol {

// Dense two-phase simplex for the small linear programs used by face
// enumeration and cone reduction: min c.x subject to A x = b, x >= 0.
struct LpResult {
  enum Status { kOptimal, kInfeasible, kUnbounded, kStalled };
  Status status = kStalled;
  double value = 0.0;
  Eigen::VectorXd x;
};
LpResult simplex_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& c);

// Largest eps such that rows * y <= -eps has a solution with |y|_inf <= 1.
// Zero when the open cone {rows * y < 0} is empty; the maximizing y is the
// best-centered interior direction otherwise.
double max_margin(const Eigen::MatrixXd& rows, Eigen::VectorXd* y_out = nullptr);

// Whether target is a nonnegative combination of the rows of gens.
bool in_cone(const Eigen::MatrixXd& gens, const Eigen::VectorXd& target, double tol = 1e-7);

// Whether p lies in the convex hull of the columns of v.
bool in_hull(const Eigen::MatrixXd& v, const Eigen::VectorXd& p, double tol = 1e-7);

}  // namespace hypervol
