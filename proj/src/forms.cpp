#include "hypervol/forms.hpp"

#include <algorithm>
#include <cmath>

#include "hypervol/errors.hpp"
#include "hypervol/rng.hpp"

namespace hypervol {

namespace {

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double factor_scale(const FormTerm& t) {
  double s = std::abs(t.coef);
  for (const HyperHermitian& f : t.factors) s *= f.frobenius_norm();
  return s;
}

// Strongly positive random monomial of degree m: product of m matrices, each
// a sum of m rank-one squares.
std::vector<HyperHermitian> random_strong_factors(int n, int m, Rng& rng) {
  std::vector<HyperHermitian> fs;
  for (int i = 0; i < m; ++i) fs.push_back(random_nonneg(n, std::max(m, 1), rng));
  return fs;
}

}  // namespace

FormClass::FormClass(int n, int k, std::vector<FormTerm> terms)
    : n_(n), k_(k), terms_(std::move(terms)) {
  if (n < 1 || k < 0 || k > n) throw ValidationError("form degree out of range");
  for (const FormTerm& t : terms_) {
    if (static_cast<int>(t.factors.size()) != k)
      throw DegreeMismatch("term factor count differs from the degree");
    for (const HyperHermitian& f : t.factors)
      if (f.n() != n) throw SizeMismatch("factor size differs from the ambient dimension");
  }
}

FormClass FormClass::unit(int n, double coef) {
  return FormClass(n, 0, {FormTerm{coef, {}}});
}

FormClass FormClass::monomial(int n, double coef, std::vector<HyperHermitian> factors) {
  int k = static_cast<int>(factors.size());
  return FormClass(n, k, {FormTerm{coef, std::move(factors)}});
}

FormClass FormClass::matrix(double coef, const HyperHermitian& a) {
  return FormClass(a.n(), 1, {FormTerm{coef, {a}}});
}

FormClass FormClass::operator+(const FormClass& o) const {
  if (o.n_ != n_) throw SizeMismatch("adding forms over different dimensions");
  if (o.k_ != k_) throw DegreeMismatch("adding forms of different degrees");
  std::vector<FormTerm> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return FormClass(n_, k_, std::move(ts));
}

FormClass FormClass::scaled(double c) const {
  std::vector<FormTerm> ts = terms_;
  for (FormTerm& t : ts) t.coef *= c;
  return FormClass(n_, k_, std::move(ts));
}

double FormClass::scale() const {
  double s = 0.0;
  for (const FormTerm& t : terms_) s += factor_scale(t);
  return s;
}

double pair(const FormClass& w, const FormClass& e) {
  if (w.n() != e.n()) throw SizeMismatch("pairing forms over different dimensions");
  if (w.k() + e.k() != w.n()) throw DegreeMismatch("pairing needs complementary degrees");
  double total = 0.0;
  for (const FormTerm& a : w.terms())
    for (const FormTerm& b : e.terms()) {
      double c = a.coef * b.coef;
      if (c == 0.0) continue;
      std::vector<HyperHermitian> fs = a.factors;
      fs.insert(fs.end(), b.factors.begin(), b.factors.end());
      total += c * mixed_discriminant(fs);
    }
  return total;
}

FormClass product(const FormClass& w, const FormClass& e) {
  if (w.n() != e.n()) throw SizeMismatch("multiplying forms over different dimensions");
  if (w.k() + e.k() > w.n()) throw DegreeOverflow("product degree exceeds the ambient dimension");
  std::vector<FormTerm> ts;
  for (const FormTerm& a : w.terms())
    for (const FormTerm& b : e.terms()) {
      FormTerm t;
      t.coef = a.coef * b.coef;
      t.factors = a.factors;
      t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
      ts.push_back(std::move(t));
    }
  return FormClass(w.n(), w.k() + e.k(), std::move(ts));
}

int gram_rank(int n, int k, int samples, std::uint64_t seed) {
  if (k < 0 || k > n) throw ValidationError("degree out of range");
  const long expected = binom(2 * n, 2 * k);
  if (samples < expected + 2)
    throw InsufficientSamples("gram rank needs samples beyond the predicted dimension");

  Rng rng = make_rng(mix64(seed, 0xf0f0));
  std::vector<std::vector<HyperHermitian>> left(samples), right(samples);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < k; ++j) left[i].push_back(random_hyperhermitian(n, rng));
    for (int j = 0; j < n - k; ++j) right[i].push_back(random_hyperhermitian(n, rng));
  }
  Eigen::MatrixXd gram(samples, samples);
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      std::vector<HyperHermitian> fs = left[i];
      fs.insert(fs.end(), right[j].begin(), right[j].end());
      gram(i, j) = mixed_discriminant(fs);
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  double top = svd.singularValues()[0];
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-8 * top) ++rank;
  return rank;
}

bool equal_zero(const FormClass& w, std::uint64_t seed, double tol) {
  const int n = w.n();
  const int m = n - w.k();
  Rng rng = make_rng(mix64(seed, 0x2e40));
  long fam = 3 * binom(2 * n, 2 * w.k());
  double ref = w.scale() + 1e-300;
  for (long s = 0; s < fam; ++s) {
    HyperHermitian b = random_hyperhermitian(n, rng);
    std::vector<HyperHermitian> bs(m, b);
    double bscale = 1.0;
    for (int j = 0; j < m; ++j) bscale *= b.frobenius_norm();
    if (std::abs(pair(w, FormClass(n, m, {FormTerm{1.0, bs}}))) > tol * ref * bscale)
      return false;
  }
  return true;
}

HyperHermitian degree1_representative(const FormClass& w) {
  if (w.k() != 1) throw DegreeMismatch("matrix representative needs degree 1");
  QMatrix acc(w.n());
  for (const FormTerm& t : w.terms()) {
    QMatrix f = t.factors[0].m().scaled(t.coef);
    acc = acc + f;
  }
  return HyperHermitian(acc);
}

HyperHermitian trace_dual_representative(const FormClass& w) {
  const int n = w.n();
  if (w.k() != n - 1) throw DegreeMismatch("trace dual needs degree n-1");
  // Entries of X with pair(A, w) = Re tr(A X) for all hyperhermitian A,
  // recovered against the orthogonal real basis of hyperhermitian matrices.
  QMatrix x(n);
  Quaternion units[4] = {Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0),
                         Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)};
  for (int p = 0; p < n; ++p) {
    QMatrix e(n);
    e.at(p, p) = Quaternion(1, 0, 0, 0);
    double v = pair(FormClass::matrix(1.0, HyperHermitian(e)), w);
    x.at(p, p) = Quaternion(v, 0, 0, 0);
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      Quaternion entry(0, 0, 0, 0);
      for (int u = 0; u < 4; ++u) {
        QMatrix e(n);
        e.at(p, q) = units[u];
        e.at(q, p) = conj(units[u]);
        // Re tr(E X) doubles the component of x_pq along this unit.
        double v = pair(FormClass::matrix(1.0, HyperHermitian(e)), w) / 2.0;
        entry = entry + units[u] * v;
      }
      x.at(p, q) = entry;
      x.at(q, p) = conj(entry);
    }
  return HyperHermitian(x);
}

FormClass PositivityCertificate::reconstruct(int n, int k) const {
  std::vector<FormTerm> ts;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    QMatrix g(n);
    for (const QVector& v : generators[i]) g = g + outer(v, v);
    HyperHermitian gh(g);
    FormTerm t;
    t.coef = coefficients[i];
    t.factors.assign(k, gh);
    ts.push_back(std::move(t));
  }
  if (ts.empty()) ts.push_back(FormTerm{0.0, std::vector<HyperHermitian>(k, HyperHermitian::identity(n))});
  return FormClass(n, k, std::move(ts));
}

namespace {

// Complement projection I - w w^* / |w|^2 as rank-one generators over an
// orthonormal completion of w.
std::vector<QVector> complement_generators(const QVector& w) {
  const int n = static_cast<int>(w.size());
  std::vector<QVector> basis;
  QVector wn = w;
  double nw = std::sqrt(dot(w, w).t);
  for (Quaternion& c : wn) c = c * (1.0 / nw);
  basis.push_back(wn);
  // Gram-Schmidt the standard basis against w.
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    QVector e(n, Quaternion(0, 0, 0, 0));
    e[i] = Quaternion(1, 0, 0, 0);
    for (const QVector& b : basis) {
      Quaternion c = dot(b, e);
      for (int j = 0; j < n; ++j) e[j] = e[j] - b[j] * c;
    }
    double ne = std::sqrt(dot(e, e).t);
    if (ne < 1e-8) continue;
    for (Quaternion& c : e) c = c * (1.0 / ne);
    basis.push_back(e);
  }
  return std::vector<QVector>(basis.begin() + 1, basis.end());
}

PositivityCertificate from_matrix_decision(const FormClass& w, const HyperHermitian& m,
                                           bool dual, std::uint64_t seed) {
  const int n = w.n();
  PositivityCertificate cert;
  cert.seed = seed;
  double tol = 1e-10 * std::max(m.frobenius_norm(), 1e-300);
  QVector neg;
  if (!negative_direction(m, tol, &neg)) {
    cert.kind = PositivityCertificate::Kind::kStrong;
    std::vector<QVector> vs = psd_decompose(m);
    if (!dual) {
      // Degree 1: m = sum v v^* directly.
      for (const QVector& v : vs) {
        cert.coefficients.push_back(1.0);
        cert.generators.push_back({v});
      }
    } else {
      // Degree n-1: dual X = sum v v^* lifts to sum n|v|^2 (I - vv^*/|v|^2)^{n-1}.
      for (const QVector& v : vs) {
        double nv2 = dot(v, v).t;
        cert.coefficients.push_back(n * nv2);
        cert.generators.push_back(complement_generators(v));
      }
    }
    return cert;
  }
  cert.kind = PositivityCertificate::Kind::kIndefinite;
  if (!dual) {
    // Witness (I - ww^*/|w|^2)^{n-1}: pairs to the negative eigenvalue over n.
    std::vector<QVector> comp = complement_generators(neg);
    QMatrix proj(n);
    for (const QVector& v : comp) proj = proj + outer(v, v);
    HyperHermitian p(proj);
    cert.witness = FormClass(n, n - 1, {FormTerm{1.0, std::vector<HyperHermitian>(n - 1, p)}});
  } else {
    double nv2 = dot(neg, neg).t;
    QVector wn = neg;
    for (Quaternion& c : wn) c = c * (1.0 / std::sqrt(nv2));
    cert.witness = FormClass::matrix(1.0, HyperHermitian(outer(wn, wn)));
  }
  cert.violation = pair(w, *cert.witness);
  return cert;
}

}  // namespace

PositivityCertificate certify_positivity(const FormClass& w, std::int64_t trials,
                                         std::uint64_t seed) {
  const int n = w.n();
  const int k = w.k();
  PositivityCertificate cert;
  cert.seed = seed;
  cert.trials = trials;

  if (k == 0 || k == n) {
    double c = k == 0 ? 0.0 : pair(w, FormClass::unit(n));
    if (k == 0)
      for (const FormTerm& t : w.terms()) c += t.coef;
    if (c >= -1e-12 * (w.scale() + 1e-300)) {
      cert.kind = PositivityCertificate::Kind::kStrong;
      cert.coefficients.push_back(c);
      std::vector<QVector> id;
      for (int i = 0; i < n; ++i) {
        QVector e(n, Quaternion(0, 0, 0, 0));
        e[i] = Quaternion(1, 0, 0, 0);
        id.push_back(e);
      }
      cert.generators.push_back(id);
    } else {
      cert.kind = PositivityCertificate::Kind::kIndefinite;
      cert.witness = FormClass::monomial(
          n, 1.0, std::vector<HyperHermitian>(n - k, HyperHermitian::identity(n)));
      cert.violation = pair(w, *cert.witness);
    }
    return cert;
  }
  if (k == 1) return from_matrix_decision(w, degree1_representative(w), false, seed);
  if (k == n - 1) return from_matrix_decision(w, trace_dual_representative(w), true, seed);

  // Middle degrees: sampled necessary condition only.
  Rng rng = make_rng(mix64(seed, 0xc0de));
  double ref = w.scale() + 1e-300;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::vector<HyperHermitian> fs = random_strong_factors(n, n - k, rng);
    FormClass beta(n, n - k, {FormTerm{1.0, fs}});
    double v = pair(w, beta);
    if (v < -1e-10 * ref * beta.scale()) {
      cert.kind = PositivityCertificate::Kind::kIndefinite;
      cert.witness = beta;
      cert.violation = v;
      return cert;
    }
  }
  cert.kind = PositivityCertificate::Kind::kWeak;
  return cert;
}

}  // namespace hypervol
