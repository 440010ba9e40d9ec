#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hypervol/quaternion.hpp"
#include "hypervol/rng.hpp"
#include "hypervol/valuations.hpp"
#include "hypervol/weak_measure.hpp"

using namespace hypervol;

namespace {

// Orthonormal basis of a random n-dim subspace of R^d.
Eigen::MatrixXd random_subspace(int d, int n, Rng& g) {
  Eigen::MatrixXd m(d, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(g);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return Eigen::MatrixXd(qr.householderQ()).leftCols(n);
}

// Vertices snapped to 1/64 keep translation and dilation arithmetic exact.
double snap(double x) { return std::round(64.0 * x) / 64.0; }

Polytope snapped_simplex(Ambient amb, int qn, int d, Rng& g) {
  Eigen::MatrixXd v(d, d + 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= d; ++j) v(i, j) = snap(normal(g));
  return Polytope::simplex(amb, qn, v);
}

// Matrix of x -> x * s on H = R^4.
Eigen::Matrix4d right_mult(const Quaternion& s) {
  Eigen::Matrix4d m;
  for (int l = 0; l < 4; ++l) {
    Quaternion r = Quaternion::unit(l) * s;
    m.col(l) << r.t, r.x, r.y, r.z;
  }
  return m;
}

}  // namespace

TEST_CASE("complex distortion closed cases") {
  Rng g = make_rng(601);

  // Any line in C^1 projects onto its own rotate with full area.
  for (int rep = 0; rep < 20; ++rep)
    CHECK(distortion_complex(random_subspace(2, 1, g)) == doctest::Approx(1.0).epsilon(1e-10));

  // The real axes of C^n.
  for (int n = 1; n <= 3; ++n) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2 * n, n);
    for (int c = 0; c < n; ++c) l(2 * c, c) = 1.0;
    CHECK(distortion_complex(l) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // A complex line inside C^2 degenerates the projection.
  Eigen::MatrixXd cl = Eigen::MatrixXd::Zero(4, 2);
  cl(0, 0) = 1.0;
  cl(1, 1) = 1.0;
  CHECK(distortion_complex(cl) == doctest::Approx(0.0).epsilon(1e-12));

  // Generic subspaces stay in [0, 1].
  for (int rep = 0; rep < 50; ++rep) {
    double f = distortion_complex(random_subspace(6, 3, g));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = 0.5;
  CHECK_THROWS_AS(distortion_complex(bad), NotOrthonormal);
}

TEST_CASE("quaternionic distortion closed cases") {
  Rng g = make_rng(602);

  // Any unit vector in H^1: the realization determinant is |q|^4 = 1.
  for (int rep = 0; rep < 20; ++rep)
    CHECK(distortion_quaternionic(random_subspace(4, 1, g)) ==
          doctest::Approx(1.0).epsilon(1e-10));

  // The real axes of H^n tile the cube under the four unit translates.
  for (int n = 1; n <= 3; ++n) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(4 * n, n);
    for (int c = 0; c < n; ++c) l(4 * c, c) = 1.0;
    CHECK(distortion_quaternionic(l) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // A subspace inside a single quaternionic line collapses.
  Eigen::MatrixXd ql = Eigen::MatrixXd::Zero(8, 2);
  ql(0, 0) = 1.0;
  ql(1, 1) = 1.0;
  CHECK(distortion_quaternionic(ql) == doctest::Approx(0.0).epsilon(1e-12));

  // Generic subspaces: positive, at most 1 (unit columns, Hadamard), and the
  // two determinant routes agree internally or the call would throw.
  for (int rep = 0; rep < 50; ++rep) {
    int n = 2 + rep % 2;
    double f = distortion_quaternionic(random_subspace(4 * n, n, g));
    CHECK(f > 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(8, 2);
  bad.col(0).setConstant(0.5);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(distortion_quaternionic(bad), NotOrthonormal);
}

TEST_CASE("kazarnovskii closed values") {
  // Segment [0, v] in C^1: the only 1-face is the segment itself.
  Eigen::MatrixXd sv(2, 2);
  sv << 0.0, 0.6, 0.0, -0.8;
  Polytope seg = Polytope::from_vertices(Ambient::kComplex, 1, sv);
  ValuationReport r = kazarnovskii(seg, 1000, 5);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.se == 0.0);
  REQUIRE(r.faces.size() == 1);
  CHECK(r.faces[0].exact_angle);
  CHECK(r.faces[0].f == doctest::Approx(1.0).epsilon(1e-12));

  // Unit box in C^2: sixteen mixed-pair 2-faces contribute 1/4 each, the
  // eight faces parallel to a complex coordinate line contribute nothing.
  Polytope box = Polytope::box(Ambient::kComplex, 2, Eigen::VectorXd::Zero(4),
                               Eigen::VectorXd::Ones(4));
  ValuationReport rb = kazarnovskii(box, 1000, 5);
  CHECK(rb.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rb.se == 0.0);
  CHECK(rb.faces.size() == 24);

  // Degree-n homogeneity, exact because every angle is closed form here.
  ValuationReport rb2 = kazarnovskii(box.dilated(2.0), 1000, 5);
  CHECK(rb2.value == doctest::Approx(4.0 * rb.value).epsilon(1e-12));

  // A triangle inside the real axes of C^2 measures its own area.
  Eigen::MatrixXd tv = Eigen::MatrixXd::Zero(4, 3);
  tv(0, 1) = 1.0;
  tv(2, 2) = 2.0;
  Polytope tri = Polytope::from_vertices(Ambient::kComplex, 2, tv);
  ValuationReport rt = kazarnovskii(tri, 1000, 5);
  CHECK(rt.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rt.se == 0.0);

  CHECK_THROWS_AS(kazarnovskii(Polytope::box(Ambient::kQuaternionic, 1,
                                             Eigen::VectorXd::Zero(4),
                                             Eigen::VectorXd::Ones(4)),
                               1000, 5),
                  ValidationError);
}

TEST_CASE("quaternionic pseudovolume closed values") {
  // Segment [0, v] in H^1.
  Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(4, 2);
  sv(0, 1) = 0.48;
  sv(1, 1) = 0.64;
  Polytope seg = Polytope::from_vertices(Ambient::kQuaternionic, 1, sv);
  ValuationReport r = pseudovolume_q(seg, 1000, 5);
  CHECK(r.value == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.se == 0.0);

  // Unit box in H^1: 32 edges, orthant cones of measure 1/8, f = 1.
  Polytope box = Polytope::box(Ambient::kQuaternionic, 1, Eigen::VectorXd::Zero(4),
                               Eigen::VectorXd::Ones(4));
  ValuationReport rb = pseudovolume_q(box, 1000, 5);
  CHECK(rb.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rb.se == 0.0);
  CHECK(rb.faces.size() == 32);

  // Unit square inside the real axes of H^2.
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(8), hi = Eigen::VectorXd::Zero(8);
  hi[0] = 1.0;
  hi[4] = 1.0;
  Polytope sq = Polytope::box(Ambient::kQuaternionic, 2, lo, hi);
  ValuationReport rs = pseudovolume_q(sq, 1000, 5);
  CHECK(rs.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rs.se == 0.0);

  // Triangle in the real axes of H^2: area again.
  Eigen::MatrixXd tv = Eigen::MatrixXd::Zero(8, 3);
  tv(0, 1) = 1.0;
  tv(4, 2) = 2.0;
  Polytope tri = Polytope::from_vertices(Ambient::kQuaternionic, 2, tv);
  CHECK(pseudovolume_q(tri, 1000, 5).value == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(pseudovolume_q(seg.retagged(Ambient::kComplex, 2), 1000, 5),
                  ValidationError);
}

TEST_CASE("pseudovolume invariances on a random simplex") {
  Rng g = make_rng(603);
  Polytope p = snapped_simplex(Ambient::kQuaternionic, 1, 4, g);
  const std::int64_t samples = 200000;
  ValuationReport base = pseudovolume_q(p, samples, 11);
  CHECK(base.value > 0.0);

  // Translation by dyadic steps moves every vertex exactly; face data and
  // angle streams reproduce bitwise.
  Eigen::VectorXd a(4);
  a << 0.5, -0.25, 2.0, -1.5;
  ValuationReport tr = pseudovolume_q(p.translated(a), samples, 11);
  CHECK(tr.value == base.value);

  // Dilation by 2 scales edge lengths exactly and reuses the same streams.
  ValuationReport di = pseudovolume_q(p.dilated(2.0), samples, 11);
  CHECK(di.value == doctest::Approx(2.0 * base.value).epsilon(1e-12));

  // Seed independence within Monte Carlo error.
  ValuationReport other = pseudovolume_q(p, samples, 99);
  CHECK(std::abs(other.value - base.value) <= 3.0 * (other.se + base.se) + 1e-12);

  // Sp(1)Sp(1) acting by q -> u q conj(s) is an isometry of the pseudovolume.
  for (int rep = 0; rep < 3; ++rep) {
    Quaternion u = random_unit_quaternion(g);
    Quaternion s = random_unit_quaternion(g);
    Eigen::Matrix4d o = realize4(u) * right_mult(conj(s));
    ValuationReport rot = pseudovolume_q(p.transformed(o), samples, 11);
    CHECK(std::abs(rot.value - base.value) <= 3.0 * (rot.se + base.se) + 1e-10);
  }

  // Hausdorff continuity probe: vertex jitter shrinking to zero drags the
  // value back within a noise-aware envelope.
  double prev = 1e100;
  for (double delta : {0.08, 0.02, 0.005}) {
    Eigen::MatrixXd v = p.vertices();
    Rng gj = make_rng(604);
    for (int i = 0; i < v.rows(); ++i)
      for (int j = 0; j < v.cols(); ++j) v(i, j) += delta * (2.0 * uniform(gj) - 1.0);
    ValuationReport rj =
        pseudovolume_q(Polytope::from_vertices(Ambient::kQuaternionic, 1, v), samples, 11);
    double err = std::abs(rj.value - base.value);
    CHECK(err <= prev + 3.0 * (rj.se + base.se));
    prev = err;
  }
  CHECK(prev <= 0.05 * (1.0 + base.value));
}

TEST_CASE("valuation additivity on glued boxes") {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(4), mid = Eigen::VectorXd::Ones(4),
                  hi = Eigen::VectorXd::Ones(4);
  mid[0] = 0.5;
  Eigen::VectorXd lo2 = Eigen::VectorXd::Zero(4);
  lo2[0] = 0.5;
  Polytope k1 = Polytope::box(Ambient::kQuaternionic, 1, lo, mid);
  Polytope k2 = Polytope::box(Ambient::kQuaternionic, 1, lo2, hi);

  AdditivityGap vol = valuation_additivity_check(k1, k2, volume_valuation);
  CHECK(vol.gap <= 1e-12);
  CHECK(vol.se == 0.0);

  auto q = [](const Polytope& p) { return pseudovolume_q(p, 1000, 5); };
  AdditivityGap gq = valuation_additivity_check(k1, k2, q);
  CHECK(gq.gap <= 1e-12);
  CHECK(gq.se == 0.0);

  AdditivityGap same = valuation_additivity_check(k1, k1, q);
  CHECK(same.gap == 0.0);

  // Disjoint boxes with a gap are caught by the segment sampler.
  Eigen::VectorXd lo3 = Eigen::VectorXd::Zero(4);
  lo3[0] = 1.5;
  Eigen::VectorXd hi3 = Eigen::VectorXd::Ones(4);
  hi3[0] = 2.5;
  Polytope k3 = Polytope::box(Ambient::kQuaternionic, 1, lo3, hi3);
  CHECK_THROWS_AS(valuation_additivity_check(k1, k3, volume_valuation), UnionNotConvex);
}

TEST_CASE("support measure pieces and total mass") {
  // Segment [0, v]: one cone, the hyperplane orthogonal to v.
  Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(4, 2);
  sv(0, 1) = 0.8;
  Polytope seg = Polytope::from_vertices(Ambient::kQuaternionic, 1, sv);
  ConePieces mu = ma_support_measure(seg);
  REQUIRE(mu.pieces.size() == 1);
  CHECK(mu.pieces[0].cone.m == 3);
  CHECK(mu.pieces[0].cone.rows.rows() == 0);
  CHECK(mu.pieces[0].density == doctest::Approx(0.8).epsilon(1e-12));

  // Statement-variant density: the twelve right translates of the unit cube
  // of the orthogonal hyperplane span a zonotope of volume 81.
  ConePieces ms = ma_support_measure(seg, true);
  CHECK(ms.pieces[0].density == doctest::Approx(9.0).epsilon(1e-9));

  // Total mass over the unit ball: kappa_3 * Q(P), exact here because the
  // cone has no walls.
  TestDensity ball = ball_indicator(1, Eigen::VectorXd::Zero(4), 1.0);
  PairEstimate est = pair_measure(mu, ball, 20000, 3);
  CHECK(est.value == doctest::Approx(0.8 * ball_volume(3)).epsilon(1e-12));

  // Regions away from every cone carry no mass.
  Eigen::VectorXd far = Eigen::VectorXd::Zero(4);
  far[0] = 0.5;
  CHECK(pair_measure(mu, scalar_bump(1, far, 0.3), 1000, 3).value == 0.0);

  // Unit box: 32 edge cones; ball mass matches kappa_3 * Q within error.
  Polytope box = Polytope::box(Ambient::kQuaternionic, 1, Eigen::VectorXd::Zero(4),
                               Eigen::VectorXd::Ones(4));
  ConePieces mb = ma_support_measure(box);
  CHECK(mb.pieces.size() == 32);
  PairEstimate eb = pair_measure(mb, ball, 100000, 3);
  double want = ball_volume(3) * pseudovolume_q(box, 1000, 5).value;
  CHECK(std::abs(eb.value - want) <= 4.0 * eb.se + 1e-9);

  CHECK_THROWS_AS(ma_support_measure(seg.retagged(Ambient::kComplex, 2)),
                  ValidationError);
}

TEST_CASE("volume valuation gates on full dimension") {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd hi(4);
  hi << 1.0, 2.0, 0.5, 1.0;
  CHECK(volume_valuation(Polytope::box(Ambient::kQuaternionic, 1, lo, hi)).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  Eigen::VectorXd flat = hi;
  flat[2] = 0.0;
  CHECK(volume_valuation(Polytope::box(Ambient::kQuaternionic, 1, lo, flat)).value == 0.0);
}
