#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hypervol/errors.hpp"
#include "hypervol/quaternion.hpp"
#include "hypervol/rng.hpp"

namespace hypervol {

using QVector = std::vector<Quaternion>;

// Dense n x n quaternionic matrix, row major.
struct QMatrix {
  int n = 0;
  std::vector<Quaternion> e;

  QMatrix() = default;
  explicit QMatrix(int n_) : n(n_), e(static_cast<std::size_t>(n_) * n_) {}

  static QMatrix identity(int n);
  static QMatrix diagonal(const Eigen::VectorXd& d);

  Quaternion& at(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
  const Quaternion& at(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }

  QMatrix adjoint() const;  // conjugate transpose
  QMatrix operator+(const QMatrix& r) const;
  QMatrix operator-(const QMatrix& r) const;
  QMatrix operator*(const QMatrix& r) const;
  QMatrix scaled(double s) const;

  double frobenius_norm() const;
};

QMatrix outer(const QVector& v, const QVector& w);  // v * w^*
QVector matvec(const QMatrix& a, const QVector& v);  // a * v
Quaternion dot(const QVector& v, const QVector& w); // sum conj(v_i) w_i

// 4n x 4n real realization: block (i,j) is realize4(a_ij). Multiplicative.
Eigen::MatrixXd realize(const QMatrix& a);

// 2n x 2n complex matrix of the action of `a` on H^n viewed as a right
// C-vector space with basis (e_1..e_n, e_1 j..e_n j). Multiplicative and
// adjoint-compatible: chi(A^*) = chi(A)^*.
Eigen::MatrixXcd chi(const QMatrix& a);

// Hyperhermitian matrix: a_ij = conj(a_ji), real diagonal. Validated on
// construction; `tol` bounds the allowed asymmetry, and the stored entries
// are symmetrized so downstream algebra sees an exactly hyperhermitian input.
class HyperHermitian {
 public:
  explicit HyperHermitian(QMatrix m, double tol = 1e-9);

  static HyperHermitian identity(int n) { return HyperHermitian(QMatrix::identity(n)); }
  static HyperHermitian diagonal(const Eigen::VectorXd& d) {
    return HyperHermitian(QMatrix::diagonal(d));
  }
  // Embeds a complex Hermitian matrix (j, k parts zero).
  static HyperHermitian from_complex(const Eigen::MatrixXcd& h, double tol = 1e-9);

  int n() const { return m_.n; }
  const QMatrix& m() const { return m_; }
  const Quaternion& at(int i, int j) const { return m_.at(i, j); }

  HyperHermitian operator+(const HyperHermitian& r) const;
  HyperHermitian operator-(const HyperHermitian& r) const;
  HyperHermitian scaled(double s) const;
  HyperHermitian plus_diagonal(const Eigen::VectorXd& t) const;
  // Deletes the rows and columns listed in `idx` (sorted, distinct).
  HyperHermitian minor_without(const std::vector<int>& idx) const;

  double frobenius_norm() const { return m_.frobenius_norm(); }

 private:
  QMatrix m_;
};

// Moore determinant via the paired spectrum of chi(A): the 2n eigenvalues
// come in coincident pairs; the product of one representative per pair is the
// determinant, sign included. Throws PairingBroken when pairing degrades.
double moore_det_spectral(const HyperHermitian& a);

// Moore determinant by recursive Schur-complement pivoting on a real diagonal
// entry; when every diagonal entry is below the pivot tolerance, retries after
// a random congruence U^* A U with U^* U = Id (determinant unchanged).
// Throws PivotFailure after `max_retries` such congruences.
double moore_det_schur(const HyperHermitian& a, std::uint64_t seed = 0x5eed,
                       int max_retries = 5);

// Dispatcher used by inner loops: closed forms for n <= 2, spectral above.
double moore_det(const HyperHermitian& a);

// Evaluates sum over index sets I of (prod_{i in I} t_i) * det(minor of A
// without rows/cols I); the empty-matrix minor contributes 1. Equals
// moore_det(A + diag(t)).
double det_plus_diagonal(const HyperHermitian& a, const Eigen::VectorXd& t);

// Mixed discriminant of n matrices of size n, by polarization over nonempty
// subsets. Symmetric, R-multilinear, and diag-normalized: all arguments equal
// gives moore_det. Size cap n <= 8 (2^n subset sums).
double mixed_discriminant(const std::vector<HyperHermitian>& as);

bool is_nonneg_definite(const HyperHermitian& a, double tol);

// Returns the eigenvalues of chi(A) reduced to one representative per
// coincident pair (ascending). These are the right eigenvalues of A.
Eigen::VectorXd spectrum(const HyperHermitian& a);

// Pulls one eigenvector of chi(A) with eigenvalue below -tol back to a
// quaternionic vector v with v^* A v < 0. Returns false when A is nonnegative.
bool negative_direction(const HyperHermitian& a, double tol, QVector* v_out);

// (det realize(A), moore_det(A^*A)^2, moore_det(AA^*)^2); the three agree.
std::array<double, 3> realization_identity_check(const QMatrix& a);

// Rank-revealing decomposition of a nonnegative hyperhermitian matrix into
// rank-one columns: A ~ sum_j l_j l_j^*. Entries below `tol` (relative to the
// largest diagonal) are treated as zero.
std::vector<QVector> psd_decompose(const HyperHermitian& a, double tol = 1e-10);

QMatrix random_qmatrix(int n, Rng& g);
HyperHermitian random_hyperhermitian(int n, Rng& g);              // G + G^*
HyperHermitian random_nonneg(int n, int rank, Rng& g);            // sum v v^*
QVector random_qvector(int n, Rng& g);
// Random quaternionic matrix with U^* U = Id (Gram-Schmidt over H from the
// right); chi(U) is then a unitary 2n x 2n lift.
QMatrix random_symplectic(int n, Rng& g);

}  // namespace hypervol
