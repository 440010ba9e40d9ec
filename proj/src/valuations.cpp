#include "hypervol/valuations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "hypervol/parallel.hpp"
#include "hypervol/qmatrix.hpp"
#include "hypervol/rng.hpp"

namespace hypervol {

namespace {

void check_orthonormal(const Eigen::MatrixXd& l) {
  const int k = static_cast<int>(l.cols());
  Eigen::MatrixXd g = l.transpose() * l - Eigen::MatrixXd::Identity(k, k);
  if (g.cwiseAbs().maxCoeff() > 1e-9)
    throw NotOrthonormal("subspace basis is not orthonormal");
}

// Complex structure on R^{2n}, coordinates paired (x_c, y_c).
Eigen::VectorXd apply_i(const Eigen::VectorXd& w) {
  Eigen::VectorXd out(w.size());
  for (int p = 0; p + 1 < w.size(); p += 2) {
    out[p] = -w[p + 1];
    out[p + 1] = w[p];
  }
  return out;
}

// Right translate by a unit quaternion on R^{4n}, coordinates in quadruples.
Eigen::VectorXd right_unit(const Eigen::VectorXd& w, int l) {
  Eigen::VectorXd out(w.size());
  Quaternion u = Quaternion::unit(l);
  for (int c = 0; c + 3 < w.size(); c += 4) {
    Quaternion q{w[c], w[c + 1], w[c + 2], w[c + 3]};
    Quaternion r = q * u;
    out[c] = r.t;
    out[c + 1] = r.x;
    out[c + 2] = r.y;
    out[c + 3] = r.z;
  }
  return out;
}

std::string polytope_id(const Polytope& p) {
  std::ostringstream os;
  os << (p.ambient() == Ambient::kQuaternionic ? "H"
         : p.ambient() == Ambient::kComplex    ? "C"
                                               : "R")
     << p.qn() << ":" << p.num_vertices() << "v";
  return os.str();
}

ValuationReport face_sum(const Polytope& p, std::int64_t samples, std::uint64_t seed,
                         double (*distortion)(const Eigen::MatrixXd&)) {
  const int n = p.qn();
  ValuationReport rep;
  rep.polytope_id = polytope_id(p);
  rep.seed = seed;
  rep.samples = samples;
  std::vector<Face> fs = faces(p, n);
  const int nf = static_cast<int>(fs.size());
  rep.faces.resize(static_cast<std::size_t>(nf));

  // Angles are independent per cone (each stream is seeded from the cone),
  // so faces can be processed in any order by any number of workers.
  std::vector<NormalCone> cones(static_cast<std::size_t>(nf));
  for (int i = 0; i < nf; ++i) cones[static_cast<std::size_t>(i)] = normal_cone(p, fs[static_cast<std::size_t>(i)], false);
  std::vector<Angle> angles(static_cast<std::size_t>(nf));
  int workers = std::min(thread_budget(), nf);
  if (workers <= 1) {
    for (int i = 0; i < nf; ++i)
      angles[static_cast<std::size_t>(i)] = exterior_angle(cones[static_cast<std::size_t>(i)], samples, seed);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w]() {
        for (int i = w; i < nf; i += workers)
          angles[static_cast<std::size_t>(i)] = exterior_angle(cones[static_cast<std::size_t>(i)], samples, seed);
      });
    for (std::thread& t : pool) t.join();
  }

  double var = 0.0;
  for (int i = 0; i < nf; ++i) {
    const Face& f = fs[static_cast<std::size_t>(i)];
    const Angle& a = angles[static_cast<std::size_t>(i)];
    FaceContribution& fc = rep.faces[static_cast<std::size_t>(i)];
    fc.verts = f.verts;
    fc.f = distortion(f.basis);
    fc.volume = f.volume;
    fc.gamma = a.gamma;
    fc.se = a.se;
    fc.exact_angle = a.exact;
    fc.value = fc.f * fc.volume * fc.gamma;
    rep.value += fc.value;
    double s = fc.f * fc.volume * fc.se;
    var += s * s;
  }
  rep.se = std::sqrt(var);
  return rep;
}

// Volume of the zonotope spanned by the columns of g (d x m): the sum of
// |det| over all d-column minors.
double zonotope_volume(const Eigen::MatrixXd& g) {
  const int d = static_cast<int>(g.rows());
  const int m = static_cast<int>(g.cols());
  if (m < d) return 0.0;
  double combos = 1.0;
  for (int i = 0; i < d; ++i) combos *= static_cast<double>(m - i) / (i + 1);
  if (combos > 1e7) throw ValidationError("zonotope volume enumeration too large");

  double total = 0.0;
  std::vector<int> pick(static_cast<std::size_t>(d));
  Eigen::MatrixXd sub(d, d);
  auto rec = [&](auto&& self, int start, int chosen) -> void {
    if (chosen == d) {
      for (int i = 0; i < d; ++i) sub.col(i) = g.col(pick[static_cast<std::size_t>(i)]);
      total += std::abs(sub.determinant());
      return;
    }
    for (int i = start; i <= m - (d - chosen); ++i) {
      pick[static_cast<std::size_t>(chosen)] = i;
      self(self, i + 1, chosen + 1);
    }
  };
  rec(rec, 0, 0);
  return total;
}

Eigen::VectorXd hull_point(const Polytope& p, Rng& g) {
  const int nv = p.num_vertices();
  Eigen::VectorXd w(nv);
  for (int i = 0; i < nv; ++i) w[i] = -std::log(uniform(g) + 1e-300);
  w /= w.sum();
  return p.vertices() * w;
}

}  // namespace

double distortion_complex(const Eigen::MatrixXd& l) {
  const int d = static_cast<int>(l.rows());
  const int n = static_cast<int>(l.cols());
  if (d != 2 * n || n < 1) throw SizeMismatch("complex distortion wants 2n x n");
  check_orthonormal(l);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(l);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd jperp(d, n);
  for (int c = 0; c < n; ++c) jperp.col(c) = apply_i(q.col(n + c));
  return std::abs((l.transpose() * jperp).determinant());
}

double distortion_quaternionic(const Eigen::MatrixXd& l) {
  const int d = static_cast<int>(l.rows());
  const int n = static_cast<int>(l.cols());
  if (d != 4 * n || n < 1) throw SizeMismatch("quaternionic distortion wants 4n x n");
  check_orthonormal(l);

  Eigen::MatrixXd r(d, d);
  QMatrix a(n);
  for (int c = 0; c < n; ++c) {
    for (int ll = 0; ll < 4; ++ll) r.col(4 * c + ll) = right_unit(l.col(c), ll);
    for (int row = 0; row < n; ++row)
      a.at(row, c) = Quaternion{l(4 * row, c), l(4 * row + 1, c), l(4 * row + 2, c),
                                l(4 * row + 3, c)};
  }
  double f = std::sqrt(std::abs(r.determinant()));
  double md = moore_det(HyperHermitian(a * a.adjoint()));
  if (std::abs(f - md) > 1e-9 * (1.0 + std::abs(md)))
    throw CheckFailed("distortion determinant routes disagree");
  return f;
}

ValuationReport kazarnovskii(const Polytope& p, std::int64_t samples, std::uint64_t seed) {
  if (p.ambient() != Ambient::kComplex)
    throw ValidationError("kazarnovskii pseudovolume needs a complex ambient");
  return face_sum(p, samples, seed, distortion_complex);
}

ValuationReport pseudovolume_q(const Polytope& p, std::int64_t samples, std::uint64_t seed) {
  if (p.ambient() != Ambient::kQuaternionic)
    throw ValidationError("quaternionic pseudovolume needs a quaternionic ambient");
  return face_sum(p, samples, seed, distortion_quaternionic);
}

ConePieces ma_support_measure(const Polytope& p, bool statement_variant) {
  if (p.ambient() != Ambient::kQuaternionic)
    throw ValidationError("support measure needs a quaternionic ambient");
  const int n = p.qn();
  ConePieces out;
  out.d = p.d();
  for (const Face& f : faces(p, n)) {
    NormalCone c = normal_cone(p, f, false);
    double density;
    if (statement_variant) {
      Eigen::MatrixXd gens(out.d, 4 * c.m);
      for (int r = 0; r < c.m; ++r)
        for (int ll = 0; ll < 4; ++ll)
          gens.col(4 * r + ll) = right_unit(c.span.col(r), ll);
      density = std::sqrt(zonotope_volume(gens));
    } else {
      density = distortion_quaternionic(f.basis) * f.volume;
    }
    out.pieces.push_back(ConePiece{std::move(c), density});
  }
  return out;
}

ValuationReport volume_valuation(const Polytope& p) {
  ValuationReport rep;
  rep.polytope_id = polytope_id(p);
  rep.value = p.dim() == p.d() ? intrinsic_volume(p) : 0.0;
  return rep;
}

AdditivityGap valuation_additivity_check(
    const Polytope& k1, const Polytope& k2,
    const std::function<ValuationReport(const Polytope&)>& val, std::uint64_t seed) {
  if (k1.d() != k2.d() || k1.ambient() != k2.ambient() || k1.qn() != k2.qn())
    throw SizeMismatch("additivity check across mismatched ambients");

  Eigen::MatrixXd uv(k1.d(), k1.num_vertices() + k2.num_vertices());
  uv << k1.vertices(), k2.vertices();
  Polytope u = Polytope::from_vertices(k1.ambient(), k1.qn(), uv);

  // Convexity of the union: points on cross segments must land in a body.
  Rng g = make_rng(mix64(seed, 0x756e696fULL));
  double tol = 1e-7 * std::max(1.0, u.scale());
  for (int s = 0; s < 200; ++s) {
    Eigen::VectorXd x = hull_point(k1, g);
    Eigen::VectorXd y = hull_point(k2, g);
    Eigen::VectorXd z = x + uniform(g) * (y - x);
    if (distance_to_hull(k1.vertices(), z) > tol &&
        distance_to_hull(k2.vertices(), z) > tol)
      throw UnionNotConvex("segment between the bodies escapes both");
  }

  Polytope inter = intersect(k1, k2);
  double vi = 0.0, si = 0.0;
  if (inter.num_vertices() > 0) {
    ValuationReport ri = val(inter);
    vi = ri.value;
    si = ri.se;
  }
  ValuationReport ru = val(u);
  ValuationReport r1 = val(k1);
  ValuationReport r2 = val(k2);

  AdditivityGap out;
  out.gap = std::abs(ru.value + vi - r1.value - r2.value);
  out.se = std::sqrt(ru.se * ru.se + si * si + r1.se * r1.se + r2.se * r2.se);
  return out;
}

}  // namespace hypervol
