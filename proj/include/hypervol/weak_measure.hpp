#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "hypervol/cones.hpp"
#include "hypervol/errors.hpp"
#include "hypervol/forms.hpp"

namespace hypervol {

// Axis-aligned integration grid: box is d x 2 (low, high per row), cells are
// cubes of side `spacing`, sampled at midpoints.
struct GridSpec {
  Eigen::MatrixXd box;
  double spacing = 0.0;
};

// Test density psi(x) = scalar(x) * form, with `form` a constant class of the
// complementary degree. `support_radius` is a pruning hint: scalar must vanish
// outside the ball around `support_center`; infinity means no hint.
struct TestDensity {
  FormClass form;
  std::function<double(const Eigen::VectorXd&)> scalar;
  Eigen::VectorXd support_center;
  double support_radius = std::numeric_limits<double>::infinity();
};

// Smooth bump of the given height at `center`, identically zero outside the
// ball of radius r. Paired with the degree-0 unit class.
TestDensity scalar_bump(int n, const Eigen::VectorXd& center, double r,
                        double height = 1.0);

// Indicator of the ball, paired with the degree-0 unit class.
TestDensity ball_indicator(int n, const Eigen::VectorXd& center, double r);

// Weak measure sampled on a grid: sparse list of (flat cell index, degree-k
// class weight). Pairing integrates weight against the density per cell.
struct GridSample {
  GridSpec spec;
  int n = 0;
  int k = 0;
  std::vector<std::pair<std::int64_t, FormClass>> cells;
};

// Weak measure carried by cones: constant scalar density against the
// m-dimensional Hausdorff measure of each cone.
struct ConePiece {
  NormalCone cone;
  double density = 0.0;
};

struct ConePieces {
  int d = 0;
  std::vector<ConePiece> pieces;
};

struct PairEstimate {
  double value = 0.0;
  double se = 0.0;
  long samples = 0;
};

// Exact pairing of a grid sample against a test density.
PairEstimate pair_measure(const GridSample& mu, const TestDensity& psi);

// Monte Carlo pairing of a cone-supported measure against a compactly
// supported density: per piece, uniform samples over the slice of the support
// ball by the cone's span. The stream is seeded from the cone content hash, so
// congruent cones replay identically. Requires a finite support radius.
PairEstimate pair_measure(const ConePieces& mu, const TestDensity& psi,
                          long samples_per_piece, std::uint64_t seed);

}  // namespace hypervol
