#include <doctest.h>

#include "hypervol/quaternion.hpp"

using namespace hypervol;

namespace {
const Quaternion I{0, 1, 0, 0}, J{0, 0, 1, 0}, K{0, 0, 0, 1};
}

TEST_CASE("hamilton product unit table") {
  CHECK(dist(I * J, K) == doctest::Approx(0.0));
  CHECK(dist(J * K, I) == doctest::Approx(0.0));
  CHECK(dist(K * I, J) == doctest::Approx(0.0));
  CHECK(dist(J * I, -K) == doctest::Approx(0.0));
  CHECK(dist(I * I, Quaternion::real(-1)) == doctest::Approx(0.0));
}

TEST_CASE("norm via conjugate") {
  Quaternion q{1, 2, 3, 4};
  Quaternion p = q * conj(q);
  CHECK(p.t == doctest::Approx(30.0));
  CHECK(std::abs(p.x) + std::abs(p.y) + std::abs(p.z) < 1e-15);
  Quaternion qi = q * inverse(q);
  CHECK(dist(qi, Quaternion::real(1)) < 1e-15);
}

TEST_CASE("realize4 matches left multiplication") {
  Rng g = make_rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    Quaternion q = random_quaternion(g), v = random_quaternion(g);
    Quaternion qv = q * v;
    Eigen::Vector4d vv(v.t, v.x, v.y, v.z);
    Eigen::Vector4d rv = realize4(q) * vv;
    CHECK(std::abs(rv[0] - qv.t) < 1e-12);
    CHECK(std::abs(rv[1] - qv.x) < 1e-12);
    CHECK(std::abs(rv[2] - qv.y) < 1e-12);
    CHECK(std::abs(rv[3] - qv.z) < 1e-12);
  }
}

TEST_CASE("realize4 and complexify are multiplicative") {
  Rng g = make_rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    Quaternion a = random_quaternion(g), b = random_quaternion(g);
    double s = std::max(1.0, norm(a) * norm(b));
    CHECK((realize4(a * b) - realize4(a) * realize4(b)).norm() < 1e-12 * s);
    CHECK((complexify(a * b) - complexify(a) * complexify(b)).norm() < 1e-12 * s);
  }
}

TEST_CASE("determinants of the realizations") {
  Rng g = make_rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    Quaternion q = random_quaternion(g);
    double n2 = norm2(q);
    CHECK(realize4(q).determinant() == doctest::Approx(n2 * n2).epsilon(1e-12));
    CHECK(complexify(q).determinant().real() == doctest::Approx(n2).epsilon(1e-12));
    CHECK(std::abs(complexify(q).determinant().imag()) < 1e-12 * std::max(1.0, n2));
  }
  Quaternion q{1, 1, 0, 0};
  CHECK(realize4(q).determinant() == doctest::Approx(4.0));
  Quaternion p{1, 2, 3, 4};
  CHECK(complexify(p).determinant().real() == doctest::Approx(30.0));
}

TEST_CASE("conj transposes the realizations") {
  Rng g = make_rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    Quaternion q = random_quaternion(g);
    CHECK((realize4(conj(q)) - realize4(q).transpose()).norm() < 1e-14 * std::max(1.0, norm(q)));
    CHECK((complexify(conj(q)) - complexify(q).adjoint()).norm() < 1e-14 * std::max(1.0, norm(q)));
  }
}

TEST_CASE("complexify special values") {
  Eigen::Matrix2cd one = complexify(Quaternion::real(1));
  CHECK((one - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  Eigen::Matrix2cd mj = complexify(J);
  CHECK(std::abs(mj(0, 0)) < 1e-15);
  CHECK(std::abs(mj(0, 1) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(mj(1, 0) - std::complex<double>(-1, 0)) < 1e-15);
  CHECK(std::abs(mj(1, 1)) < 1e-15);
  // Unit quaternions map to unitary matrices.
  Rng g = make_rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    Quaternion u = random_unit_quaternion(g);
    Eigen::Matrix2cd m = complexify(u);
    CHECK((m * m.adjoint() - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
  }
}
