#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "hypervol/errors.hpp"

namespace hypervol {

enum class Ambient { kReal, kComplex, kQuaternionic };

// Convex polytope in V-representation. The ambient tag records how R^d is
// read: d = 2n complex or d = 4n quaternionic (coordinates interleaved per
// complex/quaternionic entry). Structured constructors remember enough shape
// to enumerate faces in closed form; everything else goes through the generic
// linear-programming path, which caps the hull at 64 vertices.
class Polytope {
 public:
  enum class Kind { kGeneric, kBox, kSimplex, kZonotope, kProduct };

  static Polytope from_vertices(Ambient amb, int qn, Eigen::MatrixXd verts);
  // lo[i] == hi[i] flattens that axis.
  static Polytope box(Ambient amb, int qn, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi);
  // Affinely independent vertices required.
  static Polytope simplex(Ambient amb, int qn, const Eigen::MatrixXd& verts);
  // Minkowski sum of segments [0, g_i]; at most 12 generators.
  static Polytope zonotope(Ambient amb, int qn, const Eigen::MatrixXd& gens);
  static Polytope product(const Polytope& a, const Polytope& b);

  Ambient ambient() const { return ambient_; }
  int qn() const { return qn_; }
  int d() const { return static_cast<int>(v_.rows()); }
  int num_vertices() const { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& vertices() const { return v_; }
  Eigen::VectorXd vertex(int i) const { return v_.col(i); }
  Kind kind() const { return kind_; }
  // Affine dimension, computed once on demand.
  int dim() const;
  // Largest vertex-difference norm; tolerance reference scale.
  double scale() const;

  Polytope translated(const Eigen::VectorXd& a) const;
  Polytope dilated(double lambda) const;
  // Applies an orthogonal map; the result loses any structured shape.
  Polytope transformed(const Eigen::MatrixXd& o) const;
  Polytope retagged(Ambient amb, int qn) const;

  // Structured descriptors (valid per kind).
  const Eigen::VectorXd& box_lo() const { return box_lo_; }
  const Eigen::VectorXd& box_hi() const { return box_hi_; }
  const Eigen::MatrixXd& generators() const { return gens_; }
  const Polytope& factor(int i) const { return i == 0 ? *fac1_ : *fac2_; }
  // Zonotope bookkeeping: sign subsets realizing each vertex.
  const std::vector<std::vector<std::uint32_t>>& vertex_masks() const { return masks_; }

 private:
  Polytope() = default;
  Ambient ambient_ = Ambient::kReal;
  int qn_ = 0;
  Kind kind_ = Kind::kGeneric;
  Eigen::MatrixXd v_;
  Eigen::VectorXd box_lo_, box_hi_;
  Eigen::MatrixXd gens_;
  std::shared_ptr<const Polytope> fac1_, fac2_;
  std::vector<std::vector<std::uint32_t>> masks_;
  mutable int dim_ = -1;
  mutable double scale_ = -1.0;
};

// Face of dimension k: its vertex indices (into P.vertices()), an anchor
// vertex, an orthonormal basis of the parallel linear subspace, and the
// k-volume. faces(P, dim P) returns P itself as the single improper face.
struct Face {
  std::vector<int> verts;
  int k = 0;
  int v0 = 0;
  Eigen::MatrixXd basis;  // d x k
  double volume = 0.0;
};

double support(const Polytope& p, const Eigen::VectorXd& u,
               std::vector<int>* argmax = nullptr);

std::vector<Face> faces(const Polytope& p, int k);

// Euclidean distance from a point to conv(columns of v) by Wolfe's
// minimum-norm-point iteration.
double distance_to_hull(const Eigen::MatrixXd& v, const Eigen::VectorXd& p);

double hausdorff_distance(const Polytope& a, const Polytope& b);

// Full-dimensional volume of P inside its own affine span.
double intrinsic_volume(const Polytope& p);

// Facets as outward halfspaces <normal, x> <= offset. Requires dim P = d.
struct Halfspace {
  Eigen::VectorXd normal;
  double offset;
};
std::vector<Halfspace> facet_halfspaces(const Polytope& p);

// Vertex enumeration of the intersection of two full-dimensional polytopes.
// Empty result means empty intersection.
Polytope intersect(const Polytope& a, const Polytope& b);

}  // namespace hypervol
