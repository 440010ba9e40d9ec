#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hypervol/cones.hpp"
#include "hypervol/polytope.hpp"
#include "hypervol/weak_measure.hpp"

namespace hypervol {

// |cos(L, iL^perp)|: area distortion of the orthogonal projection from L onto
// i(L^perp). l holds an orthonormal basis of a real n-dimensional subspace of
// C^n as 2n x n columns. Zero exactly when L contains a complex line.
double distortion_complex(const Eigen::MatrixXd& l);

// f(L) = sqrt(vol_{4n}(Q_L + Q_L i + Q_L j + Q_L k)) where Q_L is the unit
// cube of a real n-dimensional subspace L of H^n (columns of l, 4n x n,
// orthonormal). Equals sqrt|det| of the 4n x 4n realization whose columns are
// the right translates of the basis by 1, i, j, k; cross-checked against the
// Moore determinant of A A^* for the quaternionic column matrix A.
double distortion_quaternionic(const Eigen::MatrixXd& l);

struct FaceContribution {
  std::vector<int> verts;  // vertex indices into the polytope
  double f = 0.0;          // distortion of the parallel subspace
  double volume = 0.0;     // relative n-volume of the face
  double gamma = 0.0;      // normalized exterior angle
  double se = 0.0;         // stderr of gamma, 0 when exact
  bool exact_angle = false;
  double value = 0.0;      // f * volume * gamma
};

struct ValuationReport {
  std::string polytope_id;
  double value = 0.0;
  double se = 0.0;  // sqrt of the summed squares of f * volume * se_gamma
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::vector<FaceContribution> faces;
};

// Kazarnovskii pseudovolume of a polytope in C^n: the sum over faces of
// dimension exactly n of f(span F) * vol_n(F) * gamma(F) with the complex
// distortion. Exterior angles fall back to Monte Carlo with per-cone streams
// derived from (seed, cone content hash).
ValuationReport kazarnovskii(const Polytope& p, std::int64_t samples = 200000,
                             std::uint64_t seed = 1);

// Quaternionic pseudovolume Q(P): same face sum with the quaternionic
// distortion, over faces of dimension exactly n in H^n.
ValuationReport pseudovolume_q(const Polytope& p, std::int64_t samples = 200000,
                               std::uint64_t seed = 1);

// Boundary measure of the Monge-Ampere operator of the support function: one
// piece per n-face, constant density on the face's normal cone. The default
// density is f(span F) * vol_n(F). The statement variant instead takes the
// square root of the volume of the zonotope spanned by the four right
// translates of the unit cube of the cone's span (exhaustive minor sum; only
// feasible for small n).
ConePieces ma_support_measure(const Polytope& p, bool statement_variant = false);

// Volume as a valuation: intrinsic volume when the polytope spans its ambient
// space, zero on flat ones.
ValuationReport volume_valuation(const Polytope& p);

struct AdditivityGap {
  double gap = 0.0;  // |val(K1 u K2) + val(K1 n K2) - val(K1) - val(K2)|
  double se = 0.0;   // combined stderr of the four evaluations
};

// Requires K1 u K2 convex. Checked by sampling points on segments between the
// two bodies; a sample outside both throws UnionNotConvex. An empty
// intersection contributes zero.
AdditivityGap valuation_additivity_check(
    const Polytope& k1, const Polytope& k2,
    const std::function<ValuationReport(const Polytope&)>& val,
    std::uint64_t seed = 7);

}  // namespace hypervol
