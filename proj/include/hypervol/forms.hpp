#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypervol/qmatrix.hpp"

namespace hypervol {

// Formal sum of degree-k monomials A_1 ... A_k in hyperhermitian matrices.
// Two classes are equal when they pair equally against every complementary
// class; all computations go through that pairing, normalized so that
// pair(A^k, A^{n-k}) = moore_det(A).
struct FormTerm {
  double coef = 0.0;
  std::vector<HyperHermitian> factors;
};

class FormClass {
 public:
  FormClass(int n, int k, std::vector<FormTerm> terms);
  // Degree-0 unit.
  static FormClass unit(int n, double coef = 1.0);
  static FormClass monomial(int n, double coef, std::vector<HyperHermitian> factors);
  // Degree-1 class from a single matrix.
  static FormClass matrix(double coef, const HyperHermitian& a);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<FormTerm>& terms() const { return terms_; }

  FormClass operator+(const FormClass& o) const;
  FormClass scaled(double c) const;
  // Magnitude reference for tolerances: sum of |coef| * prod of factor norms.
  double scale() const;

 private:
  int n_;
  int k_;
  std::vector<FormTerm> terms_;
};

// Perfect pairing between complementary degrees; bilinear extension of the
// mixed discriminant over concatenated factor lists.
double pair(const FormClass& w, const FormClass& e);

FormClass product(const FormClass& w, const FormClass& e);

// Numerical rank of the pairing Gram matrix between sampled monomial families
// of degrees k and n-k. Matches binomial(2n, 2k) when the sample size covers
// the space.
int gram_rank(int n, int k, int samples, std::uint64_t seed);

// Sampled zero test: pairs w against a spanning family of powers B^{n-k}.
bool equal_zero(const FormClass& w, std::uint64_t seed, double tol = 1e-8);

struct PositivityCertificate {
  enum class Kind { kStrong, kWeak, kIndefinite };
  Kind kind = Kind::kWeak;
  // Strong: w reconstructs as sum_i coefficients[i] * prod_j (G_ij) where
  // G_ij is built from the rank-one generators below.
  std::vector<double> coefficients;
  std::vector<std::vector<QVector>> generators;
  // Indefinite: a strongly positive complementary class pairing negatively.
  std::optional<FormClass> witness;
  double violation = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  // Reconstruction of a strong certificate as a class.
  FormClass reconstruct(int n, int k) const;
};

// Exact eigenvalue decision for degrees 0, 1, n-1, n; randomized weak test in
// between (never claimed exact).
PositivityCertificate certify_positivity(const FormClass& w, std::int64_t trials,
                                         std::uint64_t seed);

// Degree-1 matrix representative (sum of single factors weighted by
// coefficients) and degree-(n-1) dual representative under the trace pairing.
HyperHermitian degree1_representative(const FormClass& w);
HyperHermitian trace_dual_representative(const FormClass& w);

}  // namespace hypervol
