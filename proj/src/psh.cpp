#include "hypervol/psh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include "hypervol/parallel.hpp"

namespace hypervol {

// ---------------------------------------------------------------------------
// Polynomial.

namespace {

void normalize_terms(int vars, std::vector<Polynomial::Term>& terms) {
  for (const auto& t : terms) {
    if (static_cast<int>(t.exp.size()) != vars)
      throw SizeMismatch("term exponent length differs from variable count");
    for (int e : t.exp)
      if (e < 0) throw ValidationError("negative exponent");
  }
  std::sort(terms.begin(), terms.end(),
            [](const Polynomial::Term& l, const Polynomial::Term& r) { return l.exp < r.exp; });
  std::vector<Polynomial::Term> merged;
  for (auto& t : terms) {
    if (!merged.empty() && merged.back().exp == t.exp)
      merged.back().coef += t.coef;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Polynomial::Term& t) { return t.coef == 0.0; }),
               merged.end());
  terms = std::move(merged);
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

Polynomial::Polynomial(int vars, std::vector<Term> terms) : vars_(vars), terms_(std::move(terms)) {
  if (vars <= 0) throw ValidationError("polynomial needs at least one variable");
  normalize_terms(vars_, terms_);
}

Polynomial Polynomial::constant(int vars, double c) {
  return Polynomial(vars, {Term{c, std::vector<int>(static_cast<std::size_t>(vars), 0)}});
}

Polynomial Polynomial::variable(int vars, int i) {
  if (i < 0 || i >= vars) throw ValidationError("variable index out of range");
  std::vector<int> e(static_cast<std::size_t>(vars), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return Polynomial(vars, {Term{1.0, std::move(e)}});
}

int Polynomial::degree() const {
  int d = 0;
  for (const Term& t : terms_) {
    int s = 0;
    for (int e : t.exp) s += e;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  if (x.size() != vars_) throw SizeMismatch("point dimension differs from variable count");
  double total = 0.0;
  for (const Term& t : terms_) {
    double v = t.coef;
    for (int i = 0; i < vars_; ++i)
      if (t.exp[static_cast<std::size_t>(i)] > 0) v *= ipow(x[i], t.exp[static_cast<std::size_t>(i)]);
    total += v;
  }
  return total;
}

Polynomial Polynomial::partial(int i) const {
  if (i < 0 || i >= vars_) throw ValidationError("variable index out of range");
  std::vector<Term> out;
  for (const Term& t : terms_) {
    int e = t.exp[static_cast<std::size_t>(i)];
    if (e == 0) continue;
    Term d = t;
    d.coef *= e;
    d.exp[static_cast<std::size_t>(i)] = e - 1;
    out.push_back(std::move(d));
  }
  return Polynomial(vars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& r) const {
  if (vars_ != r.vars_) throw SizeMismatch("variable counts differ");
  std::vector<Term> out = terms_;
  out.insert(out.end(), r.terms_.begin(), r.terms_.end());
  return Polynomial(vars_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& r) const { return *this + r.scaled(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& r) const {
  if (vars_ != r.vars_) throw SizeMismatch("variable counts differ");
  std::vector<Term> out;
  out.reserve(terms_.size() * r.terms_.size());
  for (const Term& a : terms_)
    for (const Term& b : r.terms_) {
      Term t;
      t.coef = a.coef * b.coef;
      t.exp.resize(static_cast<std::size_t>(vars_));
      for (int i = 0; i < vars_; ++i)
        t.exp[static_cast<std::size_t>(i)] =
            a.exp[static_cast<std::size_t>(i)] + b.exp[static_cast<std::size_t>(i)];
      out.push_back(std::move(t));
    }
  return Polynomial(vars_, std::move(out));
}

Polynomial Polynomial::scaled(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coef *= s;
  return Polynomial(vars_, std::move(out));
}

Polynomial Polynomial::substitute_linear(const Eigen::MatrixXd& m) const {
  if (m.rows() != vars_ || m.cols() != vars_) throw SizeMismatch("substitution matrix must be square of the variable count");
  std::vector<Polynomial> lin;
  lin.reserve(static_cast<std::size_t>(vars_));
  for (int i = 0; i < vars_; ++i) {
    std::vector<Term> ts;
    for (int j = 0; j < vars_; ++j) {
      if (m(i, j) == 0.0) continue;
      std::vector<int> e(static_cast<std::size_t>(vars_), 0);
      e[static_cast<std::size_t>(j)] = 1;
      ts.push_back(Term{m(i, j), std::move(e)});
    }
    lin.push_back(Polynomial(vars_, std::move(ts)));
  }
  // Powers of each substituted variable, grown on demand.
  std::vector<std::vector<Polynomial>> pw(static_cast<std::size_t>(vars_));
  Polynomial out = Polynomial::zero(vars_);
  for (const Term& t : terms_) {
    Polynomial prod = Polynomial::constant(vars_, t.coef);
    for (int i = 0; i < vars_; ++i) {
      int e = t.exp[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      auto& p = pw[static_cast<std::size_t>(i)];
      if (p.empty()) p.push_back(Polynomial::constant(vars_, 1.0));
      while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * lin[static_cast<std::size_t>(i)]);
      prod = prod * p[static_cast<std::size_t>(e)];
    }
    out = out + prod;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quaternion-valued polynomials and symbolic Dirac operators.

QPolynomial QPolynomial::from_real(const Polynomial& p) {
  QPolynomial q(p.vars());
  q.c[0] = p;
  return q;
}

Quaternion QPolynomial::eval(const Eigen::VectorXd& x) const {
  return Quaternion{c[0].eval(x), c[1].eval(x), c[2].eval(x), c[3].eval(x)};
}

namespace {

// Component shuffles of left multiplication by a unit and right multiplication
// by a conjugate unit.
QPolynomial left_unit_mul(int l, const QPolynomial& f) {
  QPolynomial r(f.vars());
  switch (l) {
    case 0: r = f; break;
    case 1:
      r.c[0] = f.c[1].scaled(-1.0); r.c[1] = f.c[0];
      r.c[2] = f.c[3].scaled(-1.0); r.c[3] = f.c[2];
      break;
    case 2:
      r.c[0] = f.c[2].scaled(-1.0); r.c[1] = f.c[3];
      r.c[2] = f.c[0];              r.c[3] = f.c[1].scaled(-1.0);
      break;
    default:
      r.c[0] = f.c[3].scaled(-1.0); r.c[1] = f.c[2].scaled(-1.0);
      r.c[2] = f.c[1];              r.c[3] = f.c[0];
      break;
  }
  return r;
}

QPolynomial right_conj_unit_mul(const QPolynomial& f, int l) {
  QPolynomial r(f.vars());
  switch (l) {
    case 0: r = f; break;
    case 1:
      r.c[0] = f.c[1];              r.c[1] = f.c[0].scaled(-1.0);
      r.c[2] = f.c[3].scaled(-1.0); r.c[3] = f.c[2];
      break;
    case 2:
      r.c[0] = f.c[2];              r.c[1] = f.c[3];
      r.c[2] = f.c[0].scaled(-1.0); r.c[3] = f.c[1].scaled(-1.0);
      break;
    default:
      r.c[0] = f.c[3];              r.c[1] = f.c[2].scaled(-1.0);
      r.c[2] = f.c[1];              r.c[3] = f.c[0].scaled(-1.0);
      break;
  }
  return r;
}

void check_qvar(const QPolynomial& f, int i) {
  if (f.vars() % 4 != 0) throw SizeMismatch("quaternionic polynomial needs 4n real variables");
  if (i < 0 || 4 * i >= f.vars()) throw ValidationError("quaternionic variable index out of range");
}

}  // namespace

QPolynomial dirac_dbar(const QPolynomial& f, int i) {
  check_qvar(f, i);
  QPolynomial out(f.vars());
  for (int l = 0; l < 4; ++l) {
    QPolynomial df(f.vars());
    for (int c = 0; c < 4; ++c) df.c[c] = f.c[c].partial(4 * i + l);
    QPolynomial piece = left_unit_mul(l, df);
    for (int c = 0; c < 4; ++c) out.c[c] = out.c[c] + piece.c[c];
  }
  return out;
}

QPolynomial dirac_d(const QPolynomial& f, int i) {
  check_qvar(f, i);
  QPolynomial out(f.vars());
  for (int l = 0; l < 4; ++l) {
    QPolynomial df(f.vars());
    for (int c = 0; c < 4; ++c) df.c[c] = f.c[c].partial(4 * i + l);
    QPolynomial piece = right_conj_unit_mul(df, l);
    for (int c = 0; c < 4; ++c) out.c[c] = out.c[c] + piece.c[c];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing kernel.

namespace {

double raw_bump(double s) {
  double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

}  // namespace

SmoothMaxKernel::SmoothMaxKernel() {
  const int nodes = 4001;
  step_ = 2.0 / (nodes - 1);
  std::vector<double> raw_phi(nodes, 0.0);
  for (int i = 1; i < nodes; ++i) {
    double s0 = -1.0 + (i - 1) * step_;
    double s1 = -1.0 + i * step_;
    raw_phi[static_cast<std::size_t>(i)] =
        raw_phi[static_cast<std::size_t>(i - 1)] +
        (step_ / 6.0) * (raw_bump(s0) + 4.0 * raw_bump(0.5 * (s0 + s1)) + raw_bump(s1));
  }
  const double z = raw_phi.back();
  zinv_ = 1.0 / z;
  // Symmetrize: chi'(-s) + chi'(s) = 1 exactly, so the double integral over
  // [-1, 1] is exactly 1 and the linear tail chi(x) = x is met at x = 1.
  phi_.resize(nodes);
  bump_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    phi_[static_cast<std::size_t>(i)] =
        0.5 * (raw_phi[static_cast<std::size_t>(i)] + z - raw_phi[static_cast<std::size_t>(nodes - 1 - i)]) / z;
    bump_[static_cast<std::size_t>(i)] = raw_bump(-1.0 + i * step_) * zinv_;
  }
  chi_.assign(nodes, 0.0);
  for (int i = 1; i < nodes; ++i) {
    double y0 = phi_[static_cast<std::size_t>(i - 1)], y1 = phi_[static_cast<std::size_t>(i)];
    double d0 = bump_[static_cast<std::size_t>(i - 1)], d1 = bump_[static_cast<std::size_t>(i)];
    double mid = 0.5 * (y0 + y1) + step_ * (d0 - d1) / 8.0;
    chi_[static_cast<std::size_t>(i)] =
        chi_[static_cast<std::size_t>(i - 1)] + (step_ / 6.0) * (y0 + 4.0 * mid + y1);
  }
  double scale = 1.0 / chi_.back();
  for (double& v : chi_) v *= scale;
}

const SmoothMaxKernel& SmoothMaxKernel::instance() {
  static const SmoothMaxKernel k;
  return k;
}

namespace {

double hermite(double t, double h, double y0, double y1, double d0, double d1) {
  double t2 = t * t, t3 = t2 * t;
  return y0 * (2.0 * t3 - 3.0 * t2 + 1.0) + h * d0 * (t3 - 2.0 * t2 + t) +
         y1 * (-2.0 * t3 + 3.0 * t2) + h * d1 * (t3 - t2);
}

}  // namespace

double SmoothMaxKernel::chi(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return x;
  int i = std::min(static_cast<int>((x + 1.0) / step_), static_cast<int>(chi_.size()) - 2);
  double t = ((x + 1.0) - i * step_) / step_;
  return hermite(t, step_, chi_[static_cast<std::size_t>(i)], chi_[static_cast<std::size_t>(i + 1)],
                 phi_[static_cast<std::size_t>(i)], phi_[static_cast<std::size_t>(i + 1)]);
}

double SmoothMaxKernel::chi_p(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  int i = std::min(static_cast<int>((x + 1.0) / step_), static_cast<int>(phi_.size()) - 2);
  double t = ((x + 1.0) - i * step_) / step_;
  return hermite(t, step_, phi_[static_cast<std::size_t>(i)], phi_[static_cast<std::size_t>(i + 1)],
                 bump_[static_cast<std::size_t>(i)], bump_[static_cast<std::size_t>(i + 1)]);
}

double SmoothMaxKernel::chi_pp(double x) const {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return raw_bump(x) * zinv_;
}

// ---------------------------------------------------------------------------
// Models.

void PshModel::check_point(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw SizeMismatch("point dimension differs from model dimension");
}

Quaternion quaternionify_block(const Eigen::Matrix4d& m) {
  return Quaternion{m(0, 0) + m(1, 1) + m(2, 2) + m(3, 3),
                    m(1, 0) - m(0, 1) + m(3, 2) - m(2, 3),
                    m(2, 0) - m(0, 2) + m(1, 3) - m(3, 1),
                    m(3, 0) - m(0, 3) + m(2, 1) - m(1, 2)};
}

namespace {

HyperHermitian quaternionify(int n, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd bs = 0.5 * (b + b.transpose());
  QMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = quaternionify_block(bs.block<4, 4>(4 * i, 4 * j));
  return HyperHermitian(std::move(m));
}

QVector to_qvector(const Eigen::VectorXd& v) {
  QVector q(static_cast<std::size_t>(v.size() / 4));
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = Quaternion{v[4 * static_cast<int>(i)], v[4 * static_cast<int>(i) + 1],
                      v[4 * static_cast<int>(i) + 2], v[4 * static_cast<int>(i) + 3]};
  return q;
}

}  // namespace

HyperHermitian PshModel::hessian_q(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd b = real_hessian(x);
  if (b.rows() != dim() || b.cols() != dim()) throw SizeMismatch("hessian has wrong dimension");
  return quaternionify(n(), b);
}

PolynomialModel::PolynomialModel(int n, Polynomial p) : PshModel(n), p_(std::move(p)) {
  if (p_.vars() != 4 * n) throw SizeMismatch("polynomial must have 4n real variables");
  quadratic_ = p_.degree() <= 2;
  const int d = dim();
  if (quadratic_) {
    q_ = Eigen::MatrixXd::Zero(d, d);
    b_ = Eigen::VectorXd::Zero(d);
    c_ = 0.0;
    for (const Polynomial::Term& t : p_.terms()) {
      int first = -1, second = -1;
      for (int i = 0; i < d; ++i)
        for (int rep = 0; rep < t.exp[static_cast<std::size_t>(i)]; ++rep)
          (first < 0 ? first : second) = i;
      if (first < 0) {
        c_ += t.coef;
      } else if (second < 0) {
        b_[first] += t.coef;
      } else if (first == second) {
        q_(first, first) += 2.0 * t.coef;
      } else {
        q_(first, second) += t.coef;
        q_(second, first) += t.coef;
      }
    }
    hq_ = std::make_shared<const HyperHermitian>(quaternionify(n, q_));
  } else {
    grad_.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) grad_.push_back(p_.partial(i));
    hess_.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      auto& row = hess_[static_cast<std::size_t>(i)];
      row.reserve(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) row.push_back(grad_[static_cast<std::size_t>(i)].partial(j));
    }
  }
}

double PolynomialModel::value(const Eigen::VectorXd& x) const {
  check_point(x);
  if (quadratic_) return c_ + b_.dot(x) + 0.5 * x.dot(q_ * x);
  return p_.eval(x);
}

Eigen::VectorXd PolynomialModel::gradient(const Eigen::VectorXd& x) const {
  check_point(x);
  if (quadratic_) return b_ + q_ * x;
  Eigen::VectorXd g(dim());
  for (int i = 0; i < dim(); ++i) g[i] = grad_[static_cast<std::size_t>(i)].eval(x);
  return g;
}

Eigen::MatrixXd PolynomialModel::real_hessian(const Eigen::VectorXd& x) const {
  check_point(x);
  if (quadratic_) return q_;
  Eigen::MatrixXd h(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) h(i, j) = hess_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
  return 0.5 * (h + h.transpose());
}

HyperHermitian PolynomialModel::hessian_q(const Eigen::VectorXd& x) const {
  if (quadratic_) {
    check_point(x);
    return *hq_;
  }
  return PshModel::hessian_q(x);
}

PolynomialModel PolynomialModel::precompose_linear(const Eigen::MatrixXd& m) const {
  return PolynomialModel(n(), p_.substitute_linear(m));
}

MaxAffineModel::MaxAffineModel(int n, Eigen::MatrixXd a, Eigen::VectorXd b)
    : PshModel(n), a_(std::move(a)), b_(std::move(b)) {
  if (a_.cols() != 4 * n) throw SizeMismatch("affine pieces must have 4n coefficients");
  if (a_.rows() < 1) throw ValidationError("max-affine model needs at least one piece");
  if (b_.size() != a_.rows()) throw SizeMismatch("offset count differs from piece count");
}

double MaxAffineModel::value(const Eigen::VectorXd& x) const {
  check_point(x);
  return (a_ * x + b_).maxCoeff();
}

int MaxAffineModel::top_piece(const Eigen::VectorXd& x) const {
  Eigen::VectorXd vals = a_ * x + b_;
  int top = 0;
  vals.maxCoeff(&top);
  if (vals.size() > 1) {
    double runner = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < vals.size(); ++i)
      if (i != top) runner = std::max(runner, vals[i]);
    double tol = 1e-9 * (1.0 + vals.cwiseAbs().maxCoeff());
    if (vals[top] - runner <= tol)
      throw NotDifferentiable("point lies on a kink of the max-affine model");
  }
  return top;
}

Eigen::VectorXd MaxAffineModel::gradient(const Eigen::VectorXd& x) const {
  check_point(x);
  return a_.row(top_piece(x)).transpose();
}

Eigen::MatrixXd MaxAffineModel::real_hessian(const Eigen::VectorXd& x) const {
  check_point(x);
  top_piece(x);
  return Eigen::MatrixXd::Zero(dim(), dim());
}

MollifiedModel::MollifiedModel(MaxAffineModel base, double eps)
    : PshModel(base.n()), base_(std::move(base)), eps_(eps) {
  if (!(eps > 0.0)) throw ValidationError("mollification width must be positive");
}

Eigen::VectorXd MollifiedModel::weights(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = base_.a() * x + base_.b();
  Eigen::VectorXd w = ((z.array() - z.maxCoeff()) / eps_).exp();
  return w / w.sum();
}

double MollifiedModel::value(const Eigen::VectorXd& x) const {
  check_point(x);
  Eigen::VectorXd z = base_.a() * x + base_.b();
  double m = z.maxCoeff();
  return m + eps_ * std::log(((z.array() - m) / eps_).exp().sum());
}

Eigen::VectorXd MollifiedModel::gradient(const Eigen::VectorXd& x) const {
  check_point(x);
  return base_.a().transpose() * weights(x);
}

Eigen::MatrixXd MollifiedModel::real_hessian(const Eigen::VectorXd& x) const {
  check_point(x);
  Eigen::VectorXd w = weights(x);
  Eigen::VectorXd g = base_.a().transpose() * w;
  Eigen::MatrixXd h = -g * g.transpose();
  for (int i = 0; i < w.size(); ++i)
    h += w[i] * base_.a().row(i).transpose() * base_.a().row(i);
  return h / eps_;
}

SmoothedMaxModel::SmoothedMaxModel(std::shared_ptr<const PshModel> u,
                                   std::shared_ptr<const PshModel> v, double j)
    : PshModel(u && v ? u->n() : 1), u_(std::move(u)), v_(std::move(v)), j_(j) {
  if (!u_ || !v_) throw ValidationError("smoothed max needs both operands");
  if (u_->n() != v_->n()) throw SizeMismatch("operand dimensions differ");
  if (!(j > 0.0)) throw ValidationError("smoothing index must be positive");
}

double SmoothedMaxModel::value(const Eigen::VectorXd& x) const {
  double uv = u_->value(x), vv = v_->value(x);
  return vv + SmoothMaxKernel::instance().chi(j_ * (uv - vv)) / j_;
}

Eigen::VectorXd SmoothedMaxModel::gradient(const Eigen::VectorXd& x) const {
  double al = u_->value(x) - v_->value(x);
  double cp = SmoothMaxKernel::instance().chi_p(j_ * al);
  return v_->gradient(x) + cp * (u_->gradient(x) - v_->gradient(x));
}

Eigen::MatrixXd SmoothedMaxModel::real_hessian(const Eigen::VectorXd& x) const {
  const auto& ker = SmoothMaxKernel::instance();
  double al = u_->value(x) - v_->value(x);
  double cp = ker.chi_p(j_ * al), cpp = ker.chi_pp(j_ * al);
  Eigen::MatrixXd bu = u_->real_hessian(x), bv = v_->real_hessian(x);
  Eigen::MatrixXd h = bv + cp * (bu - bv);
  if (cpp != 0.0) {
    Eigen::VectorXd dg = u_->gradient(x) - v_->gradient(x);
    h += (j_ * cpp) * dg * dg.transpose();
  }
  return h;
}

HyperHermitian SmoothedMaxModel::hessian_q(const Eigen::VectorXd& x) const {
  const auto& ker = SmoothMaxKernel::instance();
  double al = u_->value(x) - v_->value(x);
  double cp = ker.chi_p(j_ * al), cpp = ker.chi_pp(j_ * al);
  QMatrix hu = u_->hessian_q(x).m(), hv = v_->hessian_q(x).m();
  QMatrix m = hv + (hu - hv).scaled(cp);
  if (cpp != 0.0) {
    QVector dq = to_qvector(u_->gradient(x) - v_->gradient(x));
    m = m + outer(dq, dq).scaled(j_ * cpp);
  }
  return HyperHermitian(std::move(m));
}

SmoothedMinModel::SmoothedMinModel(std::shared_ptr<const PshModel> u,
                                   std::shared_ptr<const PshModel> v, double j)
    : SmoothedMaxModel(std::move(u), std::move(v), j) {}

double SmoothedMinModel::value(const Eigen::VectorXd& x) const {
  double uv = u_->value(x), vv = v_->value(x);
  return uv - SmoothMaxKernel::instance().chi(j_ * (uv - vv)) / j_;
}

Eigen::VectorXd SmoothedMinModel::gradient(const Eigen::VectorXd& x) const {
  double al = u_->value(x) - v_->value(x);
  double cp = SmoothMaxKernel::instance().chi_p(j_ * al);
  return u_->gradient(x) - cp * (u_->gradient(x) - v_->gradient(x));
}

Eigen::MatrixXd SmoothedMinModel::real_hessian(const Eigen::VectorXd& x) const {
  const auto& ker = SmoothMaxKernel::instance();
  double al = u_->value(x) - v_->value(x);
  double cp = ker.chi_p(j_ * al), cpp = ker.chi_pp(j_ * al);
  Eigen::MatrixXd bu = u_->real_hessian(x), bv = v_->real_hessian(x);
  Eigen::MatrixXd h = bu - cp * (bu - bv);
  if (cpp != 0.0) {
    Eigen::VectorXd dg = u_->gradient(x) - v_->gradient(x);
    h -= (j_ * cpp) * dg * dg.transpose();
  }
  return h;
}

HyperHermitian SmoothedMinModel::hessian_q(const Eigen::VectorXd& x) const {
  const auto& ker = SmoothMaxKernel::instance();
  double al = u_->value(x) - v_->value(x);
  double cp = ker.chi_p(j_ * al), cpp = ker.chi_pp(j_ * al);
  QMatrix hu = u_->hessian_q(x).m(), hv = v_->hessian_q(x).m();
  QMatrix m = hu - (hu - hv).scaled(cp);
  if (cpp != 0.0) {
    QVector dq = to_qvector(u_->gradient(x) - v_->gradient(x));
    m = m - outer(dq, dq).scaled(j_ * cpp);
  }
  return HyperHermitian(std::move(m));
}

// ---------------------------------------------------------------------------
// Pointwise operators.

Quaternion dirac_dbar(const PshModel& f, const Eigen::VectorXd& x, int i) {
  if (i < 0 || i >= f.n()) throw ValidationError("quaternionic variable index out of range");
  Eigen::VectorXd g = f.gradient(x);
  return Quaternion{g[4 * i], g[4 * i + 1], g[4 * i + 2], g[4 * i + 3]};
}

Quaternion dirac_d(const PshModel& f, const Eigen::VectorXd& x, int i) {
  return conj(dirac_dbar(f, x, i));
}

HyperHermitian hessian(const PshModel& f, const Eigen::VectorXd& x) { return f.hessian_q(x); }

double ma_density(const PshModel& f, const Eigen::VectorXd& x) {
  return moore_det(f.hessian_q(x));
}

// ---------------------------------------------------------------------------
// Grid currents.

namespace {

struct GridDims {
  int d = 0;
  double h = 0.0;
  Eigen::VectorXd lo;
  std::vector<std::int64_t> num;
};

GridDims check_grid(const GridSpec& grid, int d) {
  if (grid.box.rows() != d || grid.box.cols() != 2)
    throw ValidationError("grid box must be d x 2");
  if (!(grid.spacing > 0.0)) throw ValidationError("grid spacing must be positive");
  GridDims g;
  g.d = d;
  g.h = grid.spacing;
  g.lo = grid.box.col(0);
  g.num.resize(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    double len = grid.box(a, 1) - grid.box(a, 0);
    if (!(len > 0.0)) throw ValidationError("grid box is empty on some axis");
    g.num[static_cast<std::size_t>(a)] =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(len / g.h - 1e-12)));
  }
  return g;
}

struct Sweep {
  GridDims g;
  const TestDensity* psi = nullptr;
  bool finite = false;
  double r2 = 0.0;
  std::vector<std::int64_t> base, cnt;  // pruned index window per axis
  std::vector<const PshModel*> uniq;
  std::vector<std::vector<int>> mono_slots;
  std::vector<std::optional<HyperHermitian>> cached;
  std::atomic<bool>* escape = nullptr;
};

void sweep_cell(const Sweep& sw, Eigen::VectorXd& x, std::vector<std::int64_t>& idx,
                std::vector<HyperHermitian>& tmp, std::vector<const HyperHermitian*>& hptr,
                std::vector<HyperHermitian>& fac, double* acc) {
  double s = sw.psi->scalar(x);
  if (s == 0.0) return;
  if (!sw.finite) {
    for (int a = 0; a < sw.g.d; ++a)
      if (idx[static_cast<std::size_t>(a)] < 2 ||
          idx[static_cast<std::size_t>(a)] >= sw.g.num[static_cast<std::size_t>(a)] - 2) {
        sw.escape->store(true, std::memory_order_relaxed);
        return;
      }
  }
  tmp.clear();
  for (std::size_t i = 0; i < sw.uniq.size(); ++i) {
    if (sw.cached[i]) {
      hptr[i] = &*sw.cached[i];
    } else {
      tmp.push_back(sw.uniq[i]->hessian_q(x));
      hptr[i] = &tmp.back();
    }
  }
  for (std::size_t m = 0; m < sw.mono_slots.size(); ++m) {
    double val = 0.0;
    for (const FormTerm& t : sw.psi->form.terms()) {
      fac.clear();
      for (int slot : sw.mono_slots[m]) fac.push_back(*hptr[static_cast<std::size_t>(slot)]);
      fac.insert(fac.end(), t.factors.begin(), t.factors.end());
      val += t.coef * mixed_discriminant(fac);
    }
    acc[m] += val * s;
  }
}

void sweep_axis(const Sweep& sw, int a, std::int64_t i_lo, std::int64_t i_hi, double pd2,
                Eigen::VectorXd& x, std::vector<std::int64_t>& idx,
                std::vector<HyperHermitian>& tmp, std::vector<const HyperHermitian*>& hptr,
                std::vector<HyperHermitian>& fac, double* acc) {
  for (std::int64_t ii = i_lo; ii < i_hi; ++ii) {
    std::int64_t i = sw.base[static_cast<std::size_t>(a)] + ii;
    double xa = sw.g.lo[a] + (static_cast<double>(i) + 0.5) * sw.g.h;
    double nd2 = pd2;
    if (sw.finite) {
      double dx = xa - sw.psi->support_center[a];
      nd2 += dx * dx;
      if (nd2 > sw.r2) continue;
    }
    x[a] = xa;
    idx[static_cast<std::size_t>(a)] = i;
    if (a + 1 == sw.g.d)
      sweep_cell(sw, x, idx, tmp, hptr, fac, acc);
    else
      sweep_axis(sw, a + 1, 0, sw.cnt[static_cast<std::size_t>(a + 1)], nd2, x, idx, tmp, hptr,
                 fac, acc);
  }
}

}  // namespace

std::vector<double> current_pair_many(
    const std::vector<std::vector<const PshModel*>>& monomials, const TestDensity& psi,
    const GridSpec& grid) {
  if (monomials.empty()) return {};
  int n = -1, k = -1;
  for (const auto& mono : monomials) {
    if (k < 0) k = static_cast<int>(mono.size());
    if (static_cast<int>(mono.size()) != k)
      throw DegreeMismatch("monomials must share one degree");
    for (const PshModel* f : mono) {
      if (f == nullptr) throw ValidationError("null model");
      if (n < 0) n = f->n();
      if (f->n() != n) throw SizeMismatch("model dimensions differ");
    }
  }
  if (n < 0) n = psi.form.n();
  if (psi.form.n() != n) throw SizeMismatch("density dimension differs from models");
  if (k > n) throw DegreeMismatch("monomial degree exceeds the dimension");
  if (psi.form.k() != n - k) throw DegreeMismatch("density degree must be complementary");

  Sweep sw;
  sw.g = check_grid(grid, 4 * n);
  sw.psi = &psi;
  sw.finite = std::isfinite(psi.support_radius);
  if (psi.support_center.size() != 4 * n && sw.finite)
    throw SizeMismatch("support center has wrong dimension");

  const double h = sw.g.h;
  sw.base.assign(static_cast<std::size_t>(sw.g.d), 0);
  sw.cnt = sw.g.num;
  if (sw.finite) {
    sw.r2 = psi.support_radius * psi.support_radius;
    double slack = 1e-12 * (1.0 + psi.support_center.cwiseAbs().maxCoeff() + psi.support_radius);
    for (int a = 0; a < sw.g.d; ++a) {
      double c = psi.support_center[a], r = psi.support_radius;
      double hi = sw.g.lo[a] + static_cast<double>(sw.g.num[static_cast<std::size_t>(a)]) * h;
      if (c - r < sw.g.lo[a] + 2.0 * h - slack || c + r > hi - 2.0 * h + slack)
        throw SupportEscapesGrid("density support reaches the grid margin");
      std::int64_t b = static_cast<std::int64_t>(std::floor((c - r - sw.g.lo[a]) / h));
      std::int64_t t = static_cast<std::int64_t>(std::ceil((c + r - sw.g.lo[a]) / h));
      b = std::max<std::int64_t>(0, b);
      t = std::min(sw.g.num[static_cast<std::size_t>(a)], t + 1);
      sw.base[static_cast<std::size_t>(a)] = b;
      sw.cnt[static_cast<std::size_t>(a)] = std::max<std::int64_t>(0, t - b);
    }
  }
  double enumerated = 1.0;
  for (std::size_t a = 0; a < sw.cnt.size(); ++a) enumerated *= static_cast<double>(sw.cnt[a]);
  if (enumerated > (sw.finite ? 4e9 : 2e8)) throw ValidationError("grid too large");

  // Registry of distinct models; constant Hessians are evaluated once.
  sw.mono_slots.resize(monomials.size());
  for (std::size_t m = 0; m < monomials.size(); ++m)
    for (const PshModel* f : monomials[m]) {
      int slot = -1;
      for (std::size_t i = 0; i < sw.uniq.size(); ++i)
        if (sw.uniq[i] == f) slot = static_cast<int>(i);
      if (slot < 0) {
        slot = static_cast<int>(sw.uniq.size());
        sw.uniq.push_back(f);
      }
      sw.mono_slots[m].push_back(slot);
    }
  sw.cached.resize(sw.uniq.size());
  Eigen::VectorXd probe = Eigen::VectorXd::Zero(4 * n);
  for (std::size_t i = 0; i < sw.uniq.size(); ++i)
    if (sw.uniq[i]->hessian_constant()) sw.cached[i] = sw.uniq[i]->hessian_q(probe);

  std::atomic<bool> escape{false};
  sw.escape = &escape;
  const int width = static_cast<int>(monomials.size());
  std::vector<double> sums = parallel_sum_vec(
      sw.cnt[0], width, [&sw](std::int64_t b, std::int64_t e, double* acc) {
        Eigen::VectorXd x(sw.g.d);
        std::vector<std::int64_t> idx(static_cast<std::size_t>(sw.g.d), 0);
        std::vector<HyperHermitian> tmp, fac;
        tmp.reserve(sw.uniq.size());
        std::vector<const HyperHermitian*> hptr(sw.uniq.size(), nullptr);
        sweep_axis(sw, 0, b, e, 0.0, x, idx, tmp, hptr, fac, acc);
      });
  if (escape.load()) throw SupportEscapesGrid("density support reaches the grid margin");

  double cellvol = std::pow(h, sw.g.d);
  for (double& v : sums) v *= cellvol;
  return sums;
}

double current_pair(const std::vector<const PshModel*>& fs, const TestDensity& psi,
                    const GridSpec& grid) {
  return current_pair_many({fs}, psi, grid)[0];
}

GridSample ma_grid_measure(const PshModel& f, const GridSpec& grid) {
  GridDims g = check_grid(grid, f.dim());
  double total = 1.0;
  for (std::int64_t na : g.num) total *= static_cast<double>(na);
  if (total > 2e6) throw ValidationError("grid too large for a stored sample");

  GridSample out;
  out.spec = grid;
  out.n = f.n();
  out.k = f.n();
  std::int64_t cells = static_cast<std::int64_t>(total);
  Eigen::VectorXd x(g.d);
  for (std::int64_t flat = 0; flat < cells; ++flat) {
    std::int64_t rest = flat;
    for (int a = g.d - 1; a >= 0; --a) {
      std::int64_t na = g.num[static_cast<std::size_t>(a)];
      x[a] = g.lo[a] + (static_cast<double>(rest % na) + 0.5) * g.h;
      rest /= na;
    }
    HyperHermitian hq = f.hessian_q(x);
    if (hq.frobenius_norm() == 0.0) continue;
    out.cells.emplace_back(
        flat, FormClass::monomial(f.n(), 1.0,
                                  std::vector<HyperHermitian>(static_cast<std::size_t>(f.n()), hq)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blocki identities.

namespace {

// Z[x, y], exact 64-bit coefficients.
struct P2 {
  std::map<std::pair<int, int>, long long> c;

  static P2 mono(int i, int j, long long v) {
    P2 p;
    if (v != 0) p.c[{i, j}] = v;
    return p;
  }
  P2 operator+(const P2& r) const {
    P2 out = *this;
    for (const auto& [m, v] : r.c) {
      auto it = out.c.find(m);
      long long nv = (it == out.c.end() ? 0 : it->second) + v;
      if (nv == 0) {
        if (it != out.c.end()) out.c.erase(it);
      } else {
        out.c[m] = nv;
      }
    }
    return out;
  }
  P2 operator-(const P2& r) const { return *this + r.scaled(-1); }
  P2 scaled(long long s) const {
    P2 out;
    if (s == 0) return out;
    for (const auto& [m, v] : c) out.c[m] = v * s;
    return out;
  }
  P2 operator*(const P2& r) const {
    P2 out;
    for (const auto& [ma, va] : c)
      for (const auto& [mb, vb] : r.c) {
        std::pair<int, int> m{ma.first + mb.first, ma.second + mb.second};
        long long nv = out.c[m] + va * vb;
        if (nv == 0)
          out.c.erase(m);
        else
          out.c[m] = nv;
      }
    return out;
  }
  bool operator==(const P2& r) const { return c == r.c; }
};

// a + z b modulo z^2 = z s - t.
struct R2 {
  P2 a, b;
};

R2 ring_mul(const R2& l, const R2& r, const P2& s, const P2& t) {
  P2 bb = l.b * r.b;
  R2 out;
  out.a = l.a * r.a - t * bb;
  out.b = l.a * r.b + l.b * r.a + s * bb;
  return out;
}

R2 ring_pow(const R2& z, int p, const P2& s, const P2& t) {
  R2 out{P2::mono(0, 0, 1), P2()};
  for (int i = 0; i < p; ++i) out = ring_mul(out, z, s, t);
  return out;
}

}  // namespace

bool blocki_symbolic_check(int p, int n, bool wrong_relation) {
  if (p < 2 || p > n) throw ValidationError("degree must satisfy 2 <= p <= n");
  const P2 s = P2::mono(1, 0, 1) + P2::mono(0, 1, 1);
  const P2 t = wrong_relation ? P2() : P2::mono(1, 1, 1);
  const R2 z{P2(), P2::mono(0, 0, 1)};

  R2 zp = ring_pow(z, p, s, t);

  // z^p = z sum_{k<p} x^k y^{p-1-k} - sum_{0<k<p} x^k y^{p-k}
  P2 blane, alane;
  for (int k = 0; k < p; ++k) blane = blane + P2::mono(k, p - 1 - k, 1);
  for (int k = 1; k < p; ++k) alane = alane - P2::mono(k, p - k, 1);
  bool first = zp.a == alane && zp.b == blane;

  // x^p + y^p = z^p + (x + y - z)^p
  R2 w{s, P2::mono(0, 0, -1)};
  R2 rhs = ring_pow(w, p, s, t);
  rhs.a = rhs.a + zp.a;
  rhs.b = rhs.b + zp.b;
  P2 lhs = P2::mono(p, 0, 1) + P2::mono(0, p, 1);
  bool second = rhs.a == lhs && rhs.b == P2();

  return first && second;
}

namespace {

void check_blocki_inputs(const std::shared_ptr<const PshModel>& u,
                         const std::shared_ptr<const PshModel>& v, int p,
                         const TestDensity& psi, const std::vector<double>& j_sweep) {
  if (!u || !v) throw ValidationError("both models are required");
  if (u->n() != v->n()) throw SizeMismatch("model dimensions differ");
  if (p < 2 || p > u->n()) throw ValidationError("degree must satisfy 2 <= p <= n");
  if (psi.form.k() != u->n() - p) throw DegreeMismatch("density degree must be complementary");
  if (j_sweep.empty()) throw ValidationError("empty smoothing sweep");
  for (double j : j_sweep)
    if (!(j > 0.0)) throw ValidationError("smoothing index must be positive");
}

}  // namespace

std::vector<BlockiPoint> blocki_numeric_check(std::shared_ptr<const PshModel> u,
                                              std::shared_ptr<const PshModel> v, int p,
                                              const TestDensity& psi, const GridSpec& grid,
                                              const std::vector<double>& j_sweep) {
  check_blocki_inputs(u, v, p, psi, j_sweep);
  std::vector<BlockiPoint> report;
  for (double j : j_sweep) {
    auto mx = std::make_shared<const SmoothedMaxModel>(u, v, j);
    std::vector<std::vector<const PshModel*>> monomials;
    monomials.emplace_back(static_cast<std::size_t>(p), mx.get());
    for (int k = 0; k < p; ++k) {
      std::vector<const PshModel*> mono{mx.get()};
      mono.insert(mono.end(), static_cast<std::size_t>(k), u.get());
      mono.insert(mono.end(), static_cast<std::size_t>(p - 1 - k), v.get());
      monomials.push_back(std::move(mono));
    }
    for (int k = 1; k < p; ++k) {
      std::vector<const PshModel*> mono(static_cast<std::size_t>(k), u.get());
      mono.insert(mono.end(), static_cast<std::size_t>(p - k), v.get());
      monomials.push_back(std::move(mono));
    }
    std::vector<double> vals = current_pair_many(monomials, psi, grid);
    BlockiPoint pt;
    pt.j = j;
    pt.lhs = vals[0];
    for (int k = 0; k < p; ++k) pt.rhs += vals[static_cast<std::size_t>(1 + k)];
    for (int k = 1; k < p; ++k) pt.rhs -= vals[static_cast<std::size_t>(p + k)];
    pt.gap = std::abs(pt.lhs - pt.rhs);
    report.push_back(pt);
  }
  return report;
}

std::vector<BlockiPoint> blocki_valuation_check(std::shared_ptr<const PshModel> u,
                                                std::shared_ptr<const PshModel> v, int p,
                                                const TestDensity& psi, const GridSpec& grid,
                                                const std::vector<double>& j_sweep) {
  check_blocki_inputs(u, v, p, psi, j_sweep);
  std::vector<std::vector<const PshModel*>> pure;
  pure.emplace_back(static_cast<std::size_t>(p), u.get());
  pure.emplace_back(static_cast<std::size_t>(p), v.get());
  std::vector<double> base = current_pair_many(pure, psi, grid);
  double lhs = base[0] + base[1];

  std::vector<BlockiPoint> report;
  for (double j : j_sweep) {
    auto mx = std::make_shared<const SmoothedMaxModel>(u, v, j);
    auto mn = std::make_shared<const SmoothedMinModel>(u, v, j);
    std::vector<std::vector<const PshModel*>> monomials;
    monomials.emplace_back(static_cast<std::size_t>(p), mx.get());
    monomials.emplace_back(static_cast<std::size_t>(p), mn.get());
    std::vector<double> vals = current_pair_many(monomials, psi, grid);
    BlockiPoint pt;
    pt.j = j;
    pt.lhs = lhs;
    pt.rhs = vals[0] + vals[1];
    pt.gap = std::abs(pt.lhs - pt.rhs);
    report.push_back(pt);
  }
  return report;
}

}  // namespace hypervol
