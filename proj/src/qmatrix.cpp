#include "hypervol/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypervol {

QMatrix QMatrix::identity(int n) {
  QMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Quaternion::real(1.0);
  return m;
}

QMatrix QMatrix::diagonal(const Eigen::VectorXd& d) {
  QMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n; ++i) m.at(i, i) = Quaternion::real(d[i]);
  return m;
}

QMatrix QMatrix::adjoint() const {
  QMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = conj(at(j, i));
  return r;
}

QMatrix QMatrix::operator+(const QMatrix& r) const {
  if (n != r.n) throw SizeMismatch("matrix sizes differ in +");
  QMatrix s(n);
  for (std::size_t i = 0; i < e.size(); ++i) s.e[i] = e[i] + r.e[i];
  return s;
}

QMatrix QMatrix::operator-(const QMatrix& r) const {
  if (n != r.n) throw SizeMismatch("matrix sizes differ in -");
  QMatrix s(n);
  for (std::size_t i = 0; i < e.size(); ++i) s.e[i] = e[i] - r.e[i];
  return s;
}

QMatrix QMatrix::operator*(const QMatrix& r) const {
  if (n != r.n) throw SizeMismatch("matrix sizes differ in *");
  QMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Quaternion& aik = at(i, k);
      for (int j = 0; j < n; ++j) s.at(i, j) += aik * r.at(k, j);
    }
  return s;
}

QMatrix QMatrix::scaled(double s) const {
  QMatrix r(n);
  for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] * s;
  return r;
}

double QMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& q : e) s += norm2(q);
  return std::sqrt(s);
}

QMatrix outer(const QVector& v, const QVector& w) {
  QMatrix m(static_cast<int>(v.size()));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = v[i] * conj(w[j]);
  return m;
}

QVector matvec(const QMatrix& a, const QVector& v) {
  QVector r(static_cast<std::size_t>(a.n));
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r[i] += a.at(i, j) * v[j];
  return r;
}

Quaternion dot(const QVector& v, const QVector& w) {
  Quaternion s;
  for (std::size_t i = 0; i < v.size(); ++i) s += conj(v[i]) * w[i];
  return s;
}

Eigen::MatrixXd realize(const QMatrix& a) {
  Eigen::MatrixXd m(4 * a.n, 4 * a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.block<4, 4>(4 * i, 4 * j) = realize4(a.at(i, j));
  return m;
}

Eigen::MatrixXcd chi(const QMatrix& a) {
  // Coordinates of the action in the right-C basis (e_1..e_n, e_1 j..e_n j).
  // With a_ij = p + q*j (p, q complex) the blocks are [[p, -q], [conj q, conj p]].
  const int n = a.n;
  Eigen::MatrixXcd m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::complex<double> p = complex_a(a.at(i, j));
      std::complex<double> q = complex_b(a.at(i, j));
      m(i, j) = p;
      m(i, j + n) = -q;
      m(i + n, j) = std::conj(q);
      m(i + n, j + n) = std::conj(p);
    }
  return m;
}

HyperHermitian::HyperHermitian(QMatrix m, double tol) : m_(std::move(m)) {
  const int n = m_.n;
  double scale = std::max(1.0, m_.frobenius_norm());
  for (int i = 0; i < n; ++i) {
    const Quaternion& d = m_.at(i, i);
    if (std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z) > tol * scale)
      throw ValidationError("hyperhermitian: diagonal entry has imaginary part");
    for (int j = i + 1; j < n; ++j) {
      if (dist(m_.at(i, j), conj(m_.at(j, i))) > tol * scale)
        throw ValidationError("hyperhermitian: conjugate symmetry violated");
    }
  }
  // Symmetrize so later algebra is exact.
  for (int i = 0; i < n; ++i) {
    m_.at(i, i) = Quaternion::real(m_.at(i, i).t);
    for (int j = i + 1; j < n; ++j) {
      Quaternion avg = (m_.at(i, j) + conj(m_.at(j, i))) * 0.5;
      m_.at(i, j) = avg;
      m_.at(j, i) = conj(avg);
    }
  }
}

HyperHermitian HyperHermitian::from_complex(const Eigen::MatrixXcd& h, double tol) {
  QMatrix m(static_cast<int>(h.rows()));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      m.at(i, j) = from_complex_pair(h(i, j), {0.0, 0.0});
  return HyperHermitian(std::move(m), tol);
}

HyperHermitian HyperHermitian::operator+(const HyperHermitian& r) const {
  return HyperHermitian(m_ + r.m_);
}
HyperHermitian HyperHermitian::operator-(const HyperHermitian& r) const {
  return HyperHermitian(m_ - r.m_);
}
HyperHermitian HyperHermitian::scaled(double s) const { return HyperHermitian(m_.scaled(s)); }

HyperHermitian HyperHermitian::plus_diagonal(const Eigen::VectorXd& t) const {
  if (t.size() != m_.n) throw SizeMismatch("diagonal shift length != n");
  QMatrix m = m_;
  for (int i = 0; i < m.n; ++i) m.at(i, i).t += t[i];
  return HyperHermitian(std::move(m));
}

HyperHermitian HyperHermitian::minor_without(const std::vector<int>& idx) const {
  std::vector<int> keep;
  for (int i = 0; i < m_.n; ++i)
    if (!std::binary_search(idx.begin(), idx.end(), i)) keep.push_back(i);
  QMatrix m(static_cast<int>(keep.size()));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = m_.at(keep[i], keep[j]);
  return HyperHermitian(std::move(m));
}

namespace {

Eigen::VectorXd paired_eigenvalues(const HyperHermitian& a, double* max_gap) {
  const int n = a.n();
  Eigen::MatrixXcd c = chi(a.m());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  Eigen::VectorXd rep(n);
  *max_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    double gap = std::abs(ev[2 * i + 1] - ev[2 * i]);
    *max_gap = std::max(*max_gap, gap);
    rep[i] = 0.5 * (ev[2 * i] + ev[2 * i + 1]);
  }
  return rep;
}

}  // namespace

Eigen::VectorXd spectrum(const HyperHermitian& a) {
  double gap = 0.0;
  Eigen::VectorXd rep = paired_eigenvalues(a, &gap);
  double scale = std::max(a.frobenius_norm(), 1e-300);
  if (gap > 1e-7 * scale)
    throw PairingBroken("eigenvalue pairing gap " + std::to_string(gap));
  return rep;
}

double moore_det_spectral(const HyperHermitian& a) {
  Eigen::VectorXd rep = spectrum(a);
  double p = 1.0;
  for (int i = 0; i < rep.size(); ++i) p *= rep[i];
  return p;
}

namespace {

double schur_recurse(const HyperHermitian& a, double pivot_tol) {
  const int n = a.n();
  if (n == 0) return 1.0;
  if (n == 1) return a.at(0, 0).t;

  // Pick the largest available real pivot; a symmetric permutation congruence
  // P^* A P leaves the determinant unchanged.
  int piv = -1;
  double best = pivot_tol;
  for (int i = 0; i < n; ++i)
    if (std::abs(a.at(i, i).t) > best) {
      best = std::abs(a.at(i, i).t);
      piv = i;
    }
  if (piv < 0) {
    // All pivots unusable. A negligible block contributes determinant 0
    // (covers singular inputs whose complement collapses); otherwise signal
    // the caller to retry after a random congruence.
    if (a.frobenius_norm() <= pivot_tol * n) return 0.0;
    return std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<int> order;
  order.push_back(piv);
  for (int i = 0; i < n; ++i)
    if (i != piv) order.push_back(i);

  double d = a.at(piv, piv).t;
  QMatrix s(n - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      Quaternion v_i = a.at(order[i], piv);  // column below the pivot
      Quaternion vj_conj = conj(a.at(order[j], piv));
      s.at(i - 1, j - 1) = a.at(order[i], order[j]) - v_i * vj_conj * (1.0 / d);
    }
  return d * schur_recurse(HyperHermitian(std::move(s), 1e-6), pivot_tol);
}

}  // namespace

double moore_det_schur(const HyperHermitian& a, std::uint64_t seed, int max_retries) {
  double pivot_tol = 1e-10 * std::max(a.frobenius_norm(), 1e-300);
  double v = schur_recurse(a, pivot_tol);
  if (!std::isnan(v)) return v;

  Rng g = make_rng(mix64(seed, 0x9c7u));
  HyperHermitian cur = a;
  for (int r = 0; r < max_retries; ++r) {
    QMatrix u = random_symplectic(a.n(), g);
    cur = HyperHermitian(u.adjoint() * cur.m() * u, 1e-7);
    v = schur_recurse(cur, pivot_tol);
    if (!std::isnan(v)) return v;
  }
  throw PivotFailure("no usable pivot after random congruence retries");
}

double moore_det(const HyperHermitian& a) {
  const int n = a.n();
  if (n == 0) return 1.0;
  if (n == 1) return a.at(0, 0).t;
  if (n == 2) return a.at(0, 0).t * a.at(1, 1).t - norm2(a.at(0, 1));
  return moore_det_spectral(a);
}

double det_plus_diagonal(const HyperHermitian& a, const Eigen::VectorXd& t) {
  const int n = a.n();
  if (t.size() != n) throw SizeMismatch("diagonal length != n");
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    double coeff = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        idx.push_back(i);
        coeff *= t[i];
      }
    if (coeff == 0.0) continue;
    total += coeff * moore_det(a.minor_without(idx));
  }
  return total;
}

double mixed_discriminant(const std::vector<HyperHermitian>& as) {
  const int n = static_cast<int>(as.size());
  if (n == 0) throw SizeMismatch("mixed discriminant of an empty tuple");
  if (n > 8) throw SizeMismatch("mixed discriminant capped at n = 8");
  for (const auto& a : as)
    if (a.n() != n) throw SizeMismatch("mixed discriminant needs n matrices of size n");

  // Polarization: (1/n!) sum over nonempty S of (-1)^(n-|S|) det(sum_{i in S} A_i).
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    QMatrix sum(n);
    int bits = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sum = sum + as[static_cast<std::size_t>(i)].m();
        ++bits;
      }
    double sign = ((n - bits) % 2 == 0) ? 1.0 : -1.0;
    total += sign * moore_det(HyperHermitian(std::move(sum), 1e-6));
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return total / fact;
}

bool is_nonneg_definite(const HyperHermitian& a, double tol) {
  Eigen::MatrixXcd c = chi(a.m());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0] >= -tol;
}

bool negative_direction(const HyperHermitian& a, double tol, QVector* v_out) {
  const int n = a.n();
  Eigen::MatrixXcd c = chi(a.m());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  if (es.eigenvalues()[0] >= -tol) return false;
  Eigen::VectorXcd w = es.eigenvectors().col(0);
  // Basis (e_1..e_n, e_1 j..e_n j): coordinates (w1, w2) pull back to
  // v_i = w1_i + j * w2_i.
  QVector v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::complex<double> w1 = w[i], w2 = w[i + n];
    Quaternion q1 = {w1.real(), w1.imag(), 0, 0};
    Quaternion qj = {0, 0, 1, 0};
    Quaternion q2 = {w2.real(), w2.imag(), 0, 0};
    v[static_cast<std::size_t>(i)] = q1 + qj * q2;
  }
  *v_out = v;
  return true;
}

std::array<double, 3> realization_identity_check(const QMatrix& a) {
  double dr = realize(a).determinant();
  double d1 = moore_det_spectral(HyperHermitian(a.adjoint() * a, 1e-7));
  double d2 = moore_det_spectral(HyperHermitian(a * a.adjoint(), 1e-7));
  return {dr, d1 * d1, d2 * d2};
}

std::vector<QVector> psd_decompose(const HyperHermitian& a, double tol) {
  QMatrix w = a.m();
  const int n = w.n;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(w.at(i, i).t));
  if (scale == 0.0) return {};

  std::vector<QVector> cols;
  for (int step = 0; step < n; ++step) {
    int piv = -1;
    double best = tol * scale;
    for (int i = 0; i < n; ++i)
      if (w.at(i, i).t > best) {
        best = w.at(i, i).t;
        piv = i;
      }
    if (piv < 0) break;
    double d = w.at(piv, piv).t;
    QVector l(static_cast<std::size_t>(n));
    double inv_sqrt = 1.0 / std::sqrt(d);
    for (int i = 0; i < n; ++i) l[static_cast<std::size_t>(i)] = w.at(i, piv) * inv_sqrt;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w.at(i, j) -= l[static_cast<std::size_t>(i)] * conj(l[static_cast<std::size_t>(j)]);
    cols.push_back(std::move(l));
  }
  return cols;
}

QMatrix random_qmatrix(int n, Rng& g) {
  QMatrix m(n);
  for (auto& q : m.e) q = random_quaternion(g);
  return m;
}

HyperHermitian random_hyperhermitian(int n, Rng& g) {
  QMatrix m = random_qmatrix(n, g);
  return HyperHermitian(m + m.adjoint());
}

HyperHermitian random_nonneg(int n, int rank, Rng& g) {
  QMatrix sum(n);
  for (int r = 0; r < rank; ++r) {
    QVector v = random_qvector(n, g);
    sum = sum + outer(v, v);
  }
  return HyperHermitian(std::move(sum));
}

QVector random_qvector(int n, Rng& g) {
  QVector v(static_cast<std::size_t>(n));
  for (auto& q : v) q = random_quaternion(g);
  return v;
}

QMatrix random_symplectic(int n, Rng& g) {
  // Gram-Schmidt over H with coefficients on the right.
  std::vector<QVector> cols;
  while (static_cast<int>(cols.size()) < n) {
    QVector v = random_qvector(n, g);
    for (const auto& u : cols) {
      Quaternion c = dot(u, v);
      for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= u[static_cast<std::size_t>(i)] * c;
    }
    double nv = std::sqrt(dot(v, v).t);
    if (nv < 1e-8) continue;
    for (auto& q : v) q = q * (1.0 / nv);
    cols.push_back(std::move(v));
  }
  QMatrix u(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) u.at(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return u;
}

}  // namespace hypervol
