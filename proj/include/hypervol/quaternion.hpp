#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "hypervol/rng.hpp"

namespace hypervol {

// Quaternion q = t + x*i + y*j + z*k.
//
// Convention used throughout this library: H^n is a RIGHT module, so matrices
// act on column vectors from the left and scalars multiply coordinates from
// the right. realize4(q) is therefore the matrix of LEFT multiplication by q.
struct Quaternion {
  double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

  Quaternion() = default;
  Quaternion(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_) {}
  static Quaternion real(double v) { return {v, 0, 0, 0}; }
  static Quaternion unit(int l) {
    Quaternion q;
    (l == 0 ? q.t : l == 1 ? q.x : l == 2 ? q.y : q.z) = 1.0;
    return q;
  }

  Quaternion operator+(const Quaternion& r) const { return {t + r.t, x + r.x, y + r.y, z + r.z}; }
  Quaternion operator-(const Quaternion& r) const { return {t - r.t, x - r.x, y - r.y, z - r.z}; }
  Quaternion operator-() const { return {-t, -x, -y, -z}; }
  Quaternion& operator+=(const Quaternion& r) {
    t += r.t; x += r.x; y += r.y; z += r.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& r) {
    t -= r.t; x -= r.x; y -= r.y; z -= r.z;
    return *this;
  }
  Quaternion operator*(double s) const { return {t * s, x * s, y * s, z * s}; }

  // Hamilton product (ij = k, jk = i, ki = j).
  Quaternion operator*(const Quaternion& r) const {
    return {t * r.t - x * r.x - y * r.y - z * r.z,
            t * r.x + x * r.t + y * r.z - z * r.y,
            t * r.y - x * r.z + y * r.t + z * r.x,
            t * r.z + x * r.y - y * r.x + z * r.t};
  }

  double component(int l) const { return l == 0 ? t : l == 1 ? x : l == 2 ? y : z; }
};

inline Quaternion operator*(double s, const Quaternion& q) { return q * s; }

inline Quaternion conj(const Quaternion& q) { return {q.t, -q.x, -q.y, -q.z}; }
inline double norm2(const Quaternion& q) { return q.t * q.t + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }
inline Quaternion inverse(const Quaternion& q) { return conj(q) * (1.0 / norm2(q)); }
inline double dist(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

// q = a + b*j with a, b complex (b to the LEFT of j; (y+zi)j = yj + zk).
inline std::complex<double> complex_a(const Quaternion& q) { return {q.t, q.x}; }
inline std::complex<double> complex_b(const Quaternion& q) { return {q.y, q.z}; }
inline Quaternion from_complex_pair(std::complex<double> a, std::complex<double> b) {
  return {a.real(), a.imag(), b.real(), b.imag()};
}

// Matrix of v -> q*v on H = R^4 in the basis (1, i, j, k).
inline Eigen::Matrix4d realize4(const Quaternion& q) {
  Eigen::Matrix4d m;
  m << q.t, -q.x, -q.y, -q.z,
       q.x,  q.t, -q.z,  q.y,
       q.y,  q.z,  q.t, -q.x,
       q.z, -q.y,  q.x,  q.t;
  return m;
}

// Algebra embedding H -> M_2(C): q = a + b*j -> [[a, b], [-conj(b), conj(a)]].
inline Eigen::Matrix2cd complexify(const Quaternion& q) {
  std::complex<double> a = complex_a(q), b = complex_b(q);
  Eigen::Matrix2cd m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

inline Quaternion random_quaternion(Rng& g) {
  return {normal(g), normal(g), normal(g), normal(g)};
}

inline Quaternion random_unit_quaternion(Rng& g) {
  Quaternion q;
  do {
    q = random_quaternion(g);
  } while (norm2(q) < 1e-12);
  return q * (1.0 / norm(q));
}

}  // namespace hypervol
