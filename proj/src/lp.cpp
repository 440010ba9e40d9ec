#include "hypervol/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hypervol {

namespace {

constexpr double kPivotTol = 1e-9;

// Bland's smallest-index rule throughout: slower than Dantzig but cycle-free,
// and every program solved here is small.
LpResult::Status run_simplex(Eigen::MatrixXd& t, std::vector<int>& basis, int ncols) {
  const int rows = static_cast<int>(t.rows()) - 1;  // last row = reduced costs
  const int obj = rows;
  const int rhs = ncols;
  long iter_cap = 200L * (rows + ncols) + 2000;
  for (long iter = 0; iter < iter_cap; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j)
      if (t(obj, j) < -kPivotTol) {
        enter = j;
        break;
      }
    if (enter < 0) return LpResult::kOptimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) <= kPivotTol) continue;
      double ratio = t(i, rhs) / t(i, enter);
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return LpResult::kUnbounded;

    double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (int i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[leave] = enter;
  }
  return LpResult::kStalled;
}

}  // namespace

LpResult simplex_solve(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in,
                       const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a_in.rows());
  const int n = static_cast<int>(a_in.cols());
  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }

  // Phase 1: artificial variables n..n+m-1.
  int ncols = n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  t.col(ncols).head(m) = b;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  // Reduced costs of min sum(artificials): subtract each constraint row.
  for (int j = 0; j <= ncols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += t(i, j);
    t(m, j) = (j >= n && j < ncols ? 1.0 : 0.0) - s;
  }

  LpResult res;
  LpResult::Status s1 = run_simplex(t, basis, ncols);
  double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  if (s1 != LpResult::kOptimal || -t(m, ncols) > 1e-7 * scale) {
    res.status = (s1 == LpResult::kStalled) ? LpResult::kStalled : LpResult::kInfeasible;
    return res;
  }

  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > 1e-7) {
        enter = j;
        break;
      }
    if (enter < 0) continue;  // redundant constraint row
    double piv = t(i, enter);
    t.row(i) /= piv;
    for (int k = 0; k <= m; ++k) {
      if (k == i) continue;
      double f = t(k, enter);
      if (f != 0.0) t.row(k) -= f * t.row(i);
    }
    basis[i] = enter;
  }

  // Phase 2 over the original columns.
  Eigen::MatrixXd t2(m + 1, n + 1);
  t2.block(0, 0, m, n) = t.block(0, 0, m, n);
  t2.col(n).head(m) = t.col(ncols).head(m);
  for (int j = 0; j < n; ++j) t2(m, j) = c[j];
  t2(m, n) = 0.0;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) continue;  // stuck artificial on a redundant row
    double f = t2(m, basis[i]);
    if (f != 0.0) t2.row(m) -= f * t2.row(i);
  }

  LpResult::Status s2 = run_simplex(t2, basis, n);
  res.status = s2;
  if (s2 != LpResult::kOptimal) return res;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t2(i, n);
  res.value = c.dot(res.x);
  return res;
}

double max_margin(const Eigen::MatrixXd& rows, Eigen::VectorXd* y_out) {
  const int r = static_cast<int>(rows.rows());
  const int m = static_cast<int>(rows.cols());
  if (r == 0) {
    if (y_out) *y_out = Eigen::VectorXd::Zero(m);
    return std::numeric_limits<double>::infinity();
  }
  double scale = rows.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    if (y_out) *y_out = Eigen::VectorXd::Zero(m);
    return 0.0;
  }
  Eigen::MatrixXd rr = rows / scale;

  // Variables: u in [0,2]^m (y = u - 1), eps, slack per row, slack per box.
  // Constraints: rr_k . u + eps + s_k = rr_k . 1;  u_i + t_i = 2.
  const int nvar = m + 1 + r + m;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r + m, nvar);
  Eigen::VectorXd b(r + m), c = Eigen::VectorXd::Zero(nvar);
  for (int k = 0; k < r; ++k) {
    a.block(k, 0, 1, m) = rr.row(k);
    a(k, m) = 1.0;
    a(k, m + 1 + k) = 1.0;
    b[k] = rr.row(k).sum();
  }
  for (int i = 0; i < m; ++i) {
    a(r + i, i) = 1.0;
    a(r + i, m + 1 + r + i) = 1.0;
    b[r + i] = 2.0;
  }
  c[m] = -1.0;

  LpResult res = simplex_solve(a, b, c);
  if (res.status != LpResult::kOptimal) return 0.0;
  if (y_out) *y_out = res.x.head(m).array() - 1.0;
  return -res.value * scale;
}

bool in_cone(const Eigen::MatrixXd& gens, const Eigen::VectorXd& target, double tol) {
  const int r = static_cast<int>(gens.rows());
  const int m = static_cast<int>(gens.cols());
  double scale = std::max(target.norm(), 1e-300);
  if (target.norm() <= tol) return true;
  if (r == 0) return false;

  Eigen::MatrixXd a(m, r);
  for (int j = 0; j < r; ++j) a.col(j) = gens.row(j).transpose() / scale;
  Eigen::VectorXd b = target / scale;
  // Feasibility only: constant objective.
  LpResult res = simplex_solve(a, b, Eigen::VectorXd::Zero(r));
  return res.status == LpResult::kOptimal;
}

bool in_hull(const Eigen::MatrixXd& v, const Eigen::VectorXd& p, double tol) {
  const int d = static_cast<int>(v.rows());
  const int nv = static_cast<int>(v.cols());
  if (nv == 0) return false;
  double scale = 1e-300;
  for (int j = 0; j < nv; ++j) scale = std::max(scale, (v.col(j) - p).norm());
  if (scale <= tol) return true;

  Eigen::MatrixXd a(d + 1, nv);
  for (int j = 0; j < nv; ++j) {
    a.col(j).head(d) = (v.col(j) - p) / scale;
    a(d, j) = 1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b[d] = 1.0;
  LpResult res = simplex_solve(a, b, Eigen::VectorXd::Zero(nv));
  return res.status == LpResult::kOptimal;
}

}  // namespace hypervol
