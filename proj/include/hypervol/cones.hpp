#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hypervol/polytope.hpp"

namespace hypervol {

// Normal cone of a face, reduced to coordinates on its own span.
// span: d x m orthonormal basis of the linear span of the cone (m = d - k for
// a k-face of a full-dimensional polytope, smaller when the polytope is flat).
// rows: minimal inequality system in span coordinates; the cone is
// {y : rows * y <= 0} intersected with the span, rows are unit length.
// content_hash fingerprints the local geometry (unit vertex differences
// around the face) so Monte Carlo streams can be replayed per cone: congruent
// cones get the same stream.
struct NormalCone {
  int k = 0;
  int m = 0;
  Eigen::MatrixXd span;
  Eigen::MatrixXd rows;
  std::uint64_t content_hash = 0;
};

// validate re-checks that f is a face of p and throws NotAFace otherwise.
NormalCone normal_cone(const Polytope& p, const Face& f, bool validate = true);

// Normalized exterior angle: the Gaussian measure of the cone inside its own
// span. exact is set when a closed form applied and se is then 0.
struct Angle {
  double gamma = 0.0;
  double se = 0.0;
  std::int64_t samples = 0;
  bool exact = false;
};

// Throws DegenerateCone when the cone has dimension zero (improper face) and
// InsufficientSamples when Monte Carlo is needed but samples < 1. The stream
// seed is mix64(seed, c.content_hash).
Angle exterior_angle(const NormalCone& c, std::int64_t samples, std::uint64_t seed);

// Volume of the unit m-ball.
double ball_volume(int m);

}  // namespace hypervol
