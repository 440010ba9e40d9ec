#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "hypervol/errors.hpp"
#include "hypervol/qmatrix.hpp"
#include "hypervol/weak_measure.hpp"

namespace hypervol {

// ---------------------------------------------------------------------------
// Exact polynomials in d real variables.

// Sparse multivariate polynomial; terms are kept merged and sorted so equal
// polynomials compare equal coefficient-wise.
class Polynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> exp;  // length = vars()
  };

  Polynomial(int vars, std::vector<Term> terms);

  static Polynomial zero(int vars) { return Polynomial(vars, {}); }
  static Polynomial constant(int vars, double c);
  static Polynomial variable(int vars, int i);

  int vars() const { return vars_; }
  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }

  double eval(const Eigen::VectorXd& x) const;
  Polynomial partial(int i) const;

  Polynomial operator+(const Polynomial& r) const;
  Polynomial operator-(const Polynomial& r) const;
  Polynomial operator*(const Polynomial& r) const;
  Polynomial scaled(double s) const;

  // Substitutes x -> m x (m square, vars x vars).
  Polynomial substitute_linear(const Eigen::MatrixXd& m) const;

 private:
  int vars_ = 0;
  std::vector<Term> terms_;
};

// Quaternion-valued polynomial on H^n = R^{4n}, stored per component.
struct QPolynomial {
  Polynomial c[4];

  explicit QPolynomial(int vars)
      : c{Polynomial::zero(vars), Polynomial::zero(vars),
          Polynomial::zero(vars), Polynomial::zero(vars)} {}
  static QPolynomial from_real(const Polynomial& p);

  int vars() const { return c[0].vars(); }
  Quaternion eval(const Eigen::VectorXd& x) const;
};

// Dirac operators in the i-th quaternionic variable. dbar multiplies the four
// partials by the units on the left, d by the conjugate units on the right;
// on real f the composition dbar(d(f)) is the Laplacian in that variable.
QPolynomial dirac_dbar(const QPolynomial& f, int i);
QPolynomial dirac_d(const QPolynomial& f, int i);

// ---------------------------------------------------------------------------
// Smoothing kernel for pointwise maxima.

// chi is convex, C^2, nondecreasing, with chi(x) = 0 for x <= -1 and
// chi(x) = x for x >= 1; chi'' is a normalized symmetric bump, so both tails
// are met exactly and 0 <= chi' <= 1. Tabulated once on construction.
class SmoothMaxKernel {
 public:
  static const SmoothMaxKernel& instance();

  double chi(double x) const;
  double chi_p(double x) const;
  double chi_pp(double x) const;

 private:
  SmoothMaxKernel();
  std::vector<double> chi_;   // nodes on [-1, 1]
  std::vector<double> phi_;   // chi' at the nodes
  std::vector<double> bump_;  // chi'' at the nodes
  double step_ = 0.0;
  double zinv_ = 0.0;  // bump normalization
};

// ---------------------------------------------------------------------------
// Function models on H^n.

class PshModel {
 public:
  explicit PshModel(int n) : n_(n) {
    if (n <= 0) throw ValidationError("model dimension must be positive");
  }
  virtual ~PshModel() = default;

  int n() const { return n_; }
  int dim() const { return 4 * n_; }

  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const = 0;

  // Quaternionic Hessian (d^2 f / dq_i dq_bar_j); hyperhermitian by mixed
  // partial symmetry. The default quaternionifies real_hessian.
  virtual HyperHermitian hessian_q(const Eigen::VectorXd& x) const;
  virtual bool hessian_constant() const { return false; }

 protected:
  void check_point(const Eigen::VectorXd& x) const;

 private:
  int n_ = 0;
};

// Exact polynomial model; derivatives are symbolic, never finite differences.
// Quadratics keep a closed quadratic form for fast repeated evaluation.
class PolynomialModel : public PshModel {
 public:
  PolynomialModel(int n, Polynomial p);

  const Polynomial& poly() const { return p_; }

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const override;
  HyperHermitian hessian_q(const Eigen::VectorXd& x) const override;
  bool hessian_constant() const override { return quadratic_; }

  // Model of x -> f(m x); m is the 4n x 4n real action.
  PolynomialModel precompose_linear(const Eigen::MatrixXd& m) const;

 private:
  Polynomial p_;
  bool quadratic_ = false;
  Eigen::MatrixXd q_;  // degree <= 2: value = c + b.x + x.q x / 2
  Eigen::VectorXd b_;
  double c_ = 0.0;
  std::vector<Polynomial> grad_;
  std::vector<std::vector<Polynomial>> hess_;
  std::shared_ptr<const HyperHermitian> hq_;  // cached when quadratic
};

// Pointwise maximum of affine pieces rows(a) x + b. Convex; differentiable
// off the kink set where two pieces tie within tolerance.
class MaxAffineModel : public PshModel {
 public:
  MaxAffineModel(int n, Eigen::MatrixXd a, Eigen::VectorXd b);

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  int pieces() const { return static_cast<int>(a_.rows()); }

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const override;

 private:
  int top_piece(const Eigen::VectorXd& x) const;  // NotDifferentiable on ties
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

// Log-sum-exp mollification of a max-affine model: smooth, convex, within
// eps * log(pieces) of the max uniformly. Derivatives are in closed form.
class MollifiedModel : public PshModel {
 public:
  MollifiedModel(MaxAffineModel base, double eps);

  double eps() const { return eps_; }
  const MaxAffineModel& base() const { return base_; }

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const override;

 private:
  Eigen::VectorXd weights(const Eigen::VectorXd& x) const;
  MaxAffineModel base_;
  double eps_ = 0.0;
};

// Smoothed maximum psi_j = v + chi(j (u - v)) / j: convex when u and v are,
// decreases pointwise to max{u, v} as j grows.
class SmoothedMaxModel : public PshModel {
 public:
  SmoothedMaxModel(std::shared_ptr<const PshModel> u,
                   std::shared_ptr<const PshModel> v, double j);

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const override;
  HyperHermitian hessian_q(const Eigen::VectorXd& x) const override;

 protected:
  std::shared_ptr<const PshModel> u_, v_;
  double j_ = 0.0;
};

// Smoothed minimum u + v - psi_j; increases pointwise to min{u, v}.
class SmoothedMinModel : public SmoothedMaxModel {
 public:
  SmoothedMinModel(std::shared_ptr<const PshModel> u,
                   std::shared_ptr<const PshModel> v, double j);

  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd real_hessian(const Eigen::VectorXd& x) const override;
  HyperHermitian hessian_q(const Eigen::VectorXd& x) const override;
};

// ---------------------------------------------------------------------------
// Pointwise operators.

// Quaternion q from the real 4x4 block m: sum_{l,m} e_l m_lm conj(e_m).
Quaternion quaternionify_block(const Eigen::Matrix4d& m);

// First Dirac derivatives of a scalar model in the i-th variable.
Quaternion dirac_dbar(const PshModel& f, const Eigen::VectorXd& x, int i = 0);
Quaternion dirac_d(const PshModel& f, const Eigen::VectorXd& x, int i = 0);

HyperHermitian hessian(const PshModel& f, const Eigen::VectorXd& x);

// Monge-Ampere density: Moore determinant of the quaternionic Hessian.
double ma_density(const PshModel& f, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Currents against test densities.

// Midpoint Riemann sum of pair(D2f_1 ... D2f_k, psi) over the grid. Requires
// psi supported strictly inside the box (two cell layers of margin); throws
// SupportEscapesGrid otherwise. With k = n and a scalar density this is the
// integral of the Monge-Ampere measure against psi.
double current_pair(const std::vector<const PshModel*>& fs,
                    const TestDensity& psi, const GridSpec& grid);

// Shared-sweep variant: each monomial is one factor list; one grid pass
// evaluates them all. current_pair is the single-monomial case.
std::vector<double> current_pair_many(
    const std::vector<std::vector<const PshModel*>>& monomials,
    const TestDensity& psi, const GridSpec& grid);

// Monge-Ampere measure of one model sampled on a grid (degree-n weights).
GridSample ma_grid_measure(const PshModel& f, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Blocki-style determinant identities.

// Verifies, by exact integer arithmetic in the ring Z[x,y] + z Z[x,y] with
// z^2 = z(x+y) - xy, that
//   z^p = z sum_{k<p} x^k y^{p-1-k} - sum_{0<k<p} x^k y^{p-k}
// and x^p + y^p = z^p + (x+y-z)^p. `wrong_relation` drops the xy term from
// the rewrite rule (a negative control; p = 2 must then fail).
bool blocki_symbolic_check(int p, int n, bool wrong_relation = false);

struct BlockiPoint {
  double j = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

// Numeric counterpart on smoothed maxima: for each j, integrates both sides
// of the degree-p identity against psi and reports the gap.
std::vector<BlockiPoint> blocki_numeric_check(
    std::shared_ptr<const PshModel> u, std::shared_ptr<const PshModel> v,
    int p, const TestDensity& psi, const GridSpec& grid,
    const std::vector<double>& j_sweep);

// Valuation form: (D2 u)^p + (D2 v)^p against (D2 max)^p + (D2 min)^p with
// the smoothed max/min pair at each j.
std::vector<BlockiPoint> blocki_valuation_check(
    std::shared_ptr<const PshModel> u, std::shared_ptr<const PshModel> v,
    int p, const TestDensity& psi, const GridSpec& grid,
    const std::vector<double>& j_sweep);

}  // namespace hypervol
