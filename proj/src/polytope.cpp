#include "hypervol/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>

#include "hypervol/lp.hpp"

namespace hypervol {

namespace {

void check_ambient(Ambient amb, int qn, int d) {
  if (amb == Ambient::kComplex && d != 2 * qn)
    throw ValidationError("complex ambient needs d = 2n");
  if (amb == Ambient::kQuaternionic && d != 4 * qn)
    throw ValidationError("quaternionic ambient needs d = 4n");
  if (amb == Ambient::kReal && qn != 0)
    throw ValidationError("real ambient takes qn = 0");
}

Eigen::MatrixXd dedupe_columns(const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(v.rows());
  const int nv = static_cast<int>(v.cols());
  double scale = 1.0;
  for (int j = 0; j < nv; ++j) scale = std::max(scale, v.col(j).norm());
  std::vector<int> keep;
  for (int j = 0; j < nv; ++j) {
    bool dup = false;
    for (int i : keep)
      if ((v.col(j) - v.col(i)).norm() <= 1e-9 * scale) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(j);
  }
  Eigen::MatrixXd out(d, static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<int>(j)) = v.col(keep[j]);
  return out;
}

// Orthonormal basis of the span of the columns of m (rank-revealing).
Eigen::MatrixXd span_basis(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-9 * std::max(top, 1e-300)) ++r;
  return svd.matrixU().leftCols(r);
}

double dist_to_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& r) {
  if (basis.cols() == 0) return r.norm();
  return (r - basis * (basis.transpose() * r)).norm();
}

}  // namespace

Polytope Polytope::from_vertices(Ambient amb, int qn, Eigen::MatrixXd verts) {
  check_ambient(amb, qn, static_cast<int>(verts.rows()));
  Polytope p;
  p.ambient_ = amb;
  p.qn_ = qn;
  p.kind_ = Kind::kGeneric;
  p.v_ = dedupe_columns(verts);
  return p;
}

Polytope Polytope::box(Ambient amb, int qn, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi) {
  const int d = static_cast<int>(lo.size());
  if (hi.size() != d) throw SizeMismatch("box bounds differ in length");
  check_ambient(amb, qn, d);
  std::vector<int> nd;
  for (int i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) throw ValidationError("box with hi < lo");
    if (hi[i] > lo[i]) nd.push_back(i);
  }
  if (nd.size() > 16) throw TooManyVertices("box with more than 16 proper axes");
  Polytope p;
  p.ambient_ = amb;
  p.qn_ = qn;
  p.kind_ = Kind::kBox;
  p.box_lo_ = lo;
  p.box_hi_ = hi;
  const std::uint32_t count = 1u << nd.size();
  p.v_.resize(d, count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    Eigen::VectorXd v = lo;
    for (std::size_t b = 0; b < nd.size(); ++b)
      if (mask & (1u << b)) v[nd[b]] = hi[nd[b]];
    p.v_.col(static_cast<int>(mask)) = v;
  }
  return p;
}

Polytope Polytope::simplex(Ambient amb, int qn, const Eigen::MatrixXd& verts) {
  check_ambient(amb, qn, static_cast<int>(verts.rows()));
  const int nv = static_cast<int>(verts.cols());
  if (nv == 0) throw EmptyPolytope("simplex with no vertices");
  Eigen::MatrixXd diffs(verts.rows(), nv - 1);
  for (int j = 1; j < nv; ++j) diffs.col(j - 1) = verts.col(j) - verts.col(0);
  if (static_cast<int>(span_basis(diffs).cols()) != nv - 1)
    throw ValidationError("simplex vertices not affinely independent");
  Polytope p;
  p.ambient_ = amb;
  p.qn_ = qn;
  p.kind_ = Kind::kSimplex;
  p.v_ = verts;
  return p;
}

Polytope Polytope::zonotope(Ambient amb, int qn, const Eigen::MatrixXd& gens_in) {
  const int d = static_cast<int>(gens_in.rows());
  check_ambient(amb, qn, d);
  // Drop zero generators.
  double gscale = 1e-300;
  for (int j = 0; j < gens_in.cols(); ++j) gscale = std::max(gscale, gens_in.col(j).norm());
  std::vector<int> keep;
  for (int j = 0; j < gens_in.cols(); ++j)
    if (gens_in.col(j).norm() > 1e-12 * gscale) keep.push_back(j);
  if (keep.size() > 12) throw TooManyVertices("zonotope with more than 12 generators");
  Eigen::MatrixXd gens(d, static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) gens.col(static_cast<int>(j)) = gens_in.col(keep[j]);
  const int m = static_cast<int>(gens.cols());

  // Extreme subset sums: S is a vertex mask iff some u has <g_i,u> > 0
  // exactly on S.
  std::vector<std::uint32_t> vertex_masks;
  const std::uint32_t nmask = 1u << m;
  for (std::uint32_t mask = 0; mask < nmask; ++mask) {
    Eigen::MatrixXd rows(m, d);
    for (int i = 0; i < m; ++i) {
      double sgn = (mask & (1u << i)) ? -1.0 : 1.0;
      rows.row(i) = sgn * gens.col(i).transpose();
    }
    if (max_margin(rows) > 1e-9 * gscale) vertex_masks.push_back(mask);
  }

  Polytope p;
  p.ambient_ = amb;
  p.qn_ = qn;
  p.kind_ = Kind::kZonotope;
  p.gens_ = gens;
  std::vector<Eigen::VectorXd> pts;
  for (std::uint32_t mask : vertex_masks) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) s += gens.col(i);
    bool found = false;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if ((pts[j] - s).norm() <= 1e-9 * std::max(1.0, gscale)) {
        found = true;
        break;
      }
    if (!found) pts.push_back(s);
  }
  p.v_.resize(d, static_cast<int>(pts.size()));
  p.masks_.resize(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) p.v_.col(static_cast<int>(j)) = pts[j];
  // Attach every realizing mask to its vertex (degenerate generators can give
  // one point several masks).
  for (std::uint32_t mask = 0; mask < nmask; ++mask) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) s += gens.col(i);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if ((pts[j] - s).norm() <= 1e-9 * std::max(1.0, gscale)) {
        p.masks_[j].push_back(mask);
        break;
      }
  }
  return p;
}

Polytope Polytope::product(const Polytope& a, const Polytope& b) {
  Polytope p;
  p.ambient_ = Ambient::kReal;
  p.qn_ = 0;
  p.kind_ = Kind::kProduct;
  p.fac1_ = std::make_shared<Polytope>(a);
  p.fac2_ = std::make_shared<Polytope>(b);
  const int d1 = a.d(), d2 = b.d();
  p.v_.resize(d1 + d2, a.num_vertices() * b.num_vertices());
  for (int i = 0; i < a.num_vertices(); ++i)
    for (int j = 0; j < b.num_vertices(); ++j) {
      Eigen::VectorXd v(d1 + d2);
      v.head(d1) = a.vertex(i);
      v.tail(d2) = b.vertex(j);
      p.v_.col(i * b.num_vertices() + j) = v;
    }
  return p;
}

int Polytope::dim() const {
  if (dim_ >= 0) return dim_;
  if (num_vertices() == 0) throw EmptyPolytope("dimension of an empty polytope");
  Eigen::MatrixXd diffs(d(), num_vertices() - 1);
  for (int j = 1; j < num_vertices(); ++j) diffs.col(j - 1) = v_.col(j) - v_.col(0);
  dim_ = static_cast<int>(span_basis(diffs).cols());
  return dim_;
}

double Polytope::scale() const {
  if (scale_ >= 0) return scale_;
  double s = 1e-300;
  for (int j = 1; j < num_vertices(); ++j) s = std::max(s, (v_.col(j) - v_.col(0)).norm());
  scale_ = s;
  return scale_;
}

Polytope Polytope::translated(const Eigen::VectorXd& a) const {
  if (a.size() != d()) throw SizeMismatch("translation length != d");
  Polytope p = *this;
  p.v_.colwise() += a;
  p.dim_ = -1;
  p.scale_ = -1;
  switch (kind_) {
    case Kind::kBox:
      p.box_lo_ += a;
      p.box_hi_ += a;
      break;
    case Kind::kProduct:
      p.kind_ = Kind::kGeneric;
      p.fac1_.reset();
      p.fac2_.reset();
      break;
    default:
      break;  // simplex vertices moved already; zonotope faces use masks only
  }
  return p;
}

Polytope Polytope::dilated(double lambda) const {
  if (!(lambda > 0)) throw ValidationError("dilation factor must be positive");
  Polytope p = *this;
  p.v_ *= lambda;
  p.dim_ = -1;
  p.scale_ = -1;
  switch (kind_) {
    case Kind::kBox:
      p.box_lo_ *= lambda;
      p.box_hi_ *= lambda;
      break;
    case Kind::kZonotope:
      p.gens_ *= lambda;
      break;
    case Kind::kProduct:
      p.kind_ = Kind::kGeneric;
      p.fac1_.reset();
      p.fac2_.reset();
      break;
    default:
      break;
  }
  return p;
}

Polytope Polytope::transformed(const Eigen::MatrixXd& o) const {
  if (o.rows() != d() || o.cols() != d()) throw SizeMismatch("transform must be d x d");
  if ((o.transpose() * o - Eigen::MatrixXd::Identity(d(), d())).norm() > 1e-9)
    throw ValidationError("transform must be orthogonal");
  Polytope p;
  p.ambient_ = ambient_;
  p.qn_ = qn_;
  p.kind_ = Kind::kGeneric;
  p.v_ = o * v_;
  return p;
}

Polytope Polytope::retagged(Ambient amb, int qn) const {
  check_ambient(amb, qn, d());
  Polytope p = *this;
  p.ambient_ = amb;
  p.qn_ = qn;
  return p;
}

double support(const Polytope& p, const Eigen::VectorXd& u, std::vector<int>* argmax) {
  if (p.num_vertices() == 0) throw EmptyPolytope("support of an empty polytope");
  if (u.size() != p.d()) throw SizeMismatch("direction length != d");
  Eigen::VectorXd vals = p.vertices().transpose() * u;
  double h = vals.maxCoeff();
  if (argmax) {
    argmax->clear();
    double tol = 1e-9 * p.scale() * std::max(u.norm(), 1e-300);
    for (int j = 0; j < p.num_vertices(); ++j)
      if (vals[j] >= h - tol) argmax->push_back(j);
  }
  return h;
}

namespace {

// ---- generic face lattice ----

struct Lattice {
  std::vector<int> hull;                 // indices of hull vertices
  std::vector<std::vector<Face>> level;  // level[k] = k-faces
};

std::vector<int> hull_vertices(const Polytope& p) {
  const int nv = p.num_vertices();
  std::vector<int> hull;
  for (int i = 0; i < nv; ++i) {
    Eigen::MatrixXd rows(nv - 1, p.d());
    int r = 0;
    for (int j = 0; j < nv; ++j)
      if (j != i) rows.row(r++) = (p.vertex(j) - p.vertex(i)).transpose();
    if (nv == 1 || max_margin(rows) > 1e-9 * p.scale()) hull.push_back(i);
  }
  return hull;
}

// Decides whether vertex set T (with parallel-space basis `basis`) is a face:
// some direction in span(basis)-perp must separate T strictly from the rest.
bool is_face_set(const Polytope& p, const std::vector<int>& t, const Eigen::MatrixXd& basis,
                 const std::vector<int>& hull) {
  if (static_cast<int>(t.size()) == static_cast<int>(hull.size())) return true;  // improper
  const int d = p.d();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd nperp = q.rightCols(d - basis.cols());
  Eigen::VectorXd v0 = p.vertex(t[0]);
  std::vector<int> off;
  for (int w : hull)
    if (!std::binary_search(t.begin(), t.end(), w)) off.push_back(w);
  Eigen::MatrixXd rows(static_cast<int>(off.size()), nperp.cols());
  for (std::size_t i = 0; i < off.size(); ++i)
    rows.row(static_cast<int>(i)) = (p.vertex(off[i]) - v0).transpose() * nperp;
  return max_margin(rows) > 1e-9 * p.scale();
}

void fan_volume(const Polytope& p, std::vector<Face>& level_k, const std::vector<Face>& below) {
  for (Face& f : level_k) {
    double vol = 0.0;
    Eigen::VectorXd a = p.vertex(f.v0);
    for (const Face& g : below) {
      if (!std::includes(f.verts.begin(), f.verts.end(), g.verts.begin(), g.verts.end()))
        continue;
      double h = dist_to_span(g.basis, a - p.vertex(g.v0));
      vol += h * g.volume;
    }
    f.volume = vol / f.k;
  }
}

Lattice build_generic_lattice(const Polytope& p, int kmax) {
  Lattice lat;
  lat.hull = hull_vertices(p);
  if (static_cast<int>(lat.hull.size()) > 64)
    throw TooManyVertices("generic face enumeration capped at 64 hull vertices");
  const int d = p.d();
  const int pdim = p.dim();
  double tol = 1e-9 * p.scale();

  lat.level.resize(std::min(kmax, pdim) + 1);
  for (int i : lat.hull) {
    Face f;
    f.verts = {i};
    f.k = 0;
    f.v0 = i;
    f.basis = Eigen::MatrixXd(d, 0);
    f.volume = 1.0;
    lat.level[0].push_back(f);
  }

  for (int k = 1; k <= std::min(kmax, pdim); ++k) {
    std::set<std::vector<int>> seen;
    if (k == pdim) {
      // Improper face: the polytope itself.
      Face f;
      f.verts = lat.hull;
      f.k = k;
      f.v0 = lat.hull[0];
      Eigen::MatrixXd diffs(d, static_cast<int>(lat.hull.size()) - 1);
      for (std::size_t j = 1; j < lat.hull.size(); ++j)
        diffs.col(static_cast<int>(j - 1)) = p.vertex(lat.hull[j]) - p.vertex(lat.hull[0]);
      f.basis = span_basis(diffs);
      lat.level[k].push_back(f);
      fan_volume(p, lat.level[k], lat.level[k - 1]);
      break;
    }
    for (const Face& f : lat.level[k - 1]) {
      Eigen::VectorXd v0 = p.vertex(f.v0);
      for (int v : lat.hull) {
        if (std::binary_search(f.verts.begin(), f.verts.end(), v)) continue;
        Eigen::VectorXd r = p.vertex(v) - v0;
        Eigen::VectorXd rp = r - f.basis * (f.basis.transpose() * r);
        if (rp.norm() <= tol) continue;  // v already in the affine span
        Eigen::MatrixXd ext(d, k);
        ext.leftCols(k - 1) = f.basis;
        ext.col(k - 1) = rp / rp.norm();
        std::vector<int> t;
        for (int w : lat.hull)
          if (dist_to_span(ext, p.vertex(w) - v0) <= tol) t.push_back(w);
        if (static_cast<int>(t.size()) < k + 1) continue;
        if (!seen.insert(t).second) continue;
        Eigen::MatrixXd diffs(d, static_cast<int>(t.size()) - 1);
        for (std::size_t j = 1; j < t.size(); ++j)
          diffs.col(static_cast<int>(j - 1)) = p.vertex(t[j]) - p.vertex(t[0]);
        Eigen::MatrixXd basis = span_basis(diffs);
        if (static_cast<int>(basis.cols()) != k) continue;
        if (!is_face_set(p, t, basis, lat.hull)) continue;
        Face nf;
        nf.verts = t;
        nf.k = k;
        nf.v0 = t[0];
        nf.basis = basis;
        lat.level[k].push_back(nf);
      }
    }
    fan_volume(p, lat.level[k], lat.level[k - 1]);
  }
  return lat;
}

// ---- structured face lattices ----

std::vector<Face> box_faces(const Polytope& p, int k) {
  const Eigen::VectorXd& lo = p.box_lo();
  const Eigen::VectorXd& hi = p.box_hi();
  const int d = p.d();
  std::vector<int> nd;
  for (int i = 0; i < d; ++i)
    if (hi[i] > lo[i]) nd.push_back(i);
  const int nf = static_cast<int>(nd.size());
  std::vector<Face> out;
  if (k > nf) return out;

  // Choose k free axes, then low/high statuses for the rest.
  std::vector<int> pick(k);
  std::vector<int> rest;
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == k) {
      rest.clear();
      for (int b = 0; b < nf; ++b)
        if (std::find(pick.begin(), pick.end(), b) == pick.end()) rest.push_back(b);
      const std::uint32_t nst = 1u << rest.size();
      for (std::uint32_t st = 0; st < nst; ++st) {
        Face f;
        f.k = k;
        f.basis = Eigen::MatrixXd::Zero(d, k);
        double vol = 1.0;
        for (int j = 0; j < k; ++j) {
          f.basis(nd[pick[j]], j) = 1.0;
          vol *= hi[nd[pick[j]]] - lo[nd[pick[j]]];
        }
        f.volume = vol;
        const std::uint32_t nmask = 1u << nf;
        for (std::uint32_t mask = 0; mask < nmask; ++mask) {
          bool match = true;
          for (std::size_t rj = 0; rj < rest.size(); ++rj) {
            bool high = (mask >> rest[rj]) & 1u;
            bool want = (st >> rj) & 1u;
            if (high != want) {
              match = false;
              break;
            }
          }
          if (match) f.verts.push_back(static_cast<int>(mask));
        }
        f.v0 = f.verts[0];
        out.push_back(std::move(f));
      }
      return;
    }
    for (int b = start; b < nf; ++b) {
      pick[chosen] = b;
      rec(b + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return out;
}

std::vector<Face> simplex_faces(const Polytope& p, int k) {
  const int nv = p.num_vertices();
  std::vector<Face> out;
  if (k > nv - 1) return out;
  std::vector<int> pick(k + 1);
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == k + 1) {
      Face f;
      f.verts = pick;
      f.k = k;
      f.v0 = pick[0];
      Eigen::MatrixXd diffs(p.d(), k);
      for (int j = 1; j <= k; ++j) diffs.col(j - 1) = p.vertex(pick[j]) - p.vertex(pick[0]);
      f.basis = span_basis(diffs);
      if (k == 0) {
        f.volume = 1.0;
      } else {
        Eigen::MatrixXd gram = diffs.transpose() * diffs;
        double det = gram.determinant();
        double fact = 1.0;
        for (int j = 2; j <= k; ++j) fact *= j;
        f.volume = std::sqrt(std::max(det, 0.0)) / fact;
      }
      out.push_back(std::move(f));
      return;
    }
    for (int b = start; b < nv; ++b) {
      pick[chosen] = b;
      rec(b + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return out;
}

double zonotope_face_volume(const Eigen::MatrixXd& gens_t, const Eigen::MatrixXd& basis) {
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return 1.0;
  Eigen::MatrixXd coords = basis.transpose() * gens_t;  // k x |T|
  const int m = static_cast<int>(coords.cols());
  double total = 0.0;
  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == k) {
      Eigen::MatrixXd sq(k, k);
      for (int j = 0; j < k; ++j) sq.col(j) = coords.col(pick[j]);
      total += std::abs(sq.determinant());
      return;
    }
    for (int b = start; b < m; ++b) {
      pick[chosen] = b;
      rec(b + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return total;
}

std::vector<Face> zonotope_faces(const Polytope& p, int k) {
  const Eigen::MatrixXd& gens = p.generators();
  const int d = p.d();
  const int m = static_cast<int>(gens.cols());
  double gscale = 1e-300;
  for (int j = 0; j < m; ++j) gscale = std::max(gscale, gens.col(j).norm());

  // Span-closed generator subsets of rank k.
  std::set<std::uint32_t> flats;
  const std::uint32_t nmask = 1u << m;
  for (std::uint32_t t = 0; t < nmask; ++t) {
    Eigen::MatrixXd gt(d, __builtin_popcount(t));
    int c = 0;
    for (int i = 0; i < m; ++i)
      if (t & (1u << i)) gt.col(c++) = gens.col(i);
    Eigen::MatrixXd basis = span_basis(gt);
    if (static_cast<int>(basis.cols()) != k) continue;
    std::uint32_t closure = 0;
    for (int i = 0; i < m; ++i)
      if (dist_to_span(basis, gens.col(i)) <= 1e-9 * gens.col(i).norm()) closure |= 1u << i;
    if (closure == t) flats.insert(t);
  }

  std::vector<Face> out;
  std::set<std::vector<int>> seen;
  for (std::uint32_t t : flats) {
    Eigen::MatrixXd gt(d, __builtin_popcount(t));
    std::vector<int> off;
    int c = 0;
    for (int i = 0; i < m; ++i) {
      if (t & (1u << i))
        gt.col(c++) = gens.col(i);
      else
        off.push_back(i);
    }
    Eigen::MatrixXd basis = span_basis(gt);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    Eigen::MatrixXd nperp = Eigen::MatrixXd(qr.householderQ()).rightCols(d - k);

    // DFS over sign assignments for the remaining generators, pruned by the
    // margin LP so only realizable chambers are visited.
    std::vector<int> sign(off.size(), 0);
    std::function<void(std::size_t)> dfs = [&](std::size_t idx) {
      Eigen::MatrixXd rows(static_cast<int>(idx), nperp.cols());
      for (std::size_t i = 0; i < idx; ++i)
        rows.row(static_cast<int>(i)) =
            -sign[i] * (gens.col(off[i]).transpose() * nperp);
      if (idx > 0 && max_margin(rows) <= 1e-9 * gscale) return;
      if (idx == off.size()) {
        std::uint32_t plus = 0;
        for (std::size_t i = 0; i < off.size(); ++i)
          if (sign[i] > 0) plus |= 1u << off[i];
        Face f;
        f.k = k;
        f.basis = basis;
        for (int vi = 0; vi < p.num_vertices(); ++vi)
          for (std::uint32_t mask : p.vertex_masks()[vi])
            if ((mask & ~t) == plus) {
              f.verts.push_back(vi);
              break;
            }
        if (f.verts.empty()) return;
        std::sort(f.verts.begin(), f.verts.end());
        if (!seen.insert(f.verts).second) return;
        f.v0 = f.verts[0];
        f.volume = zonotope_face_volume(gt, basis);
        out.push_back(std::move(f));
        return;
      }
      sign[idx] = 1;
      dfs(idx + 1);
      sign[idx] = -1;
      dfs(idx + 1);
    };
    dfs(0);
  }
  return out;
}

std::vector<Face> product_faces(const Polytope& p, int k) {
  const Polytope& a = p.factor(0);
  const Polytope& b = p.factor(1);
  const int d1 = a.d(), d2 = b.d();
  std::vector<Face> out;
  for (int k1 = std::max(0, k - b.dim()); k1 <= std::min(k, a.dim()); ++k1) {
    std::vector<Face> fa = faces(a, k1);
    std::vector<Face> fb = faces(b, k - k1);
    for (const Face& f1 : fa)
      for (const Face& f2 : fb) {
        Face f;
        f.k = k;
        f.basis = Eigen::MatrixXd::Zero(d1 + d2, k);
        f.basis.block(0, 0, d1, k1) = f1.basis;
        f.basis.block(d1, k1, d2, k - k1) = f2.basis;
        f.volume = f1.volume * f2.volume;
        for (int i1 : f1.verts)
          for (int i2 : f2.verts) f.verts.push_back(i1 * b.num_vertices() + i2);
        std::sort(f.verts.begin(), f.verts.end());
        f.v0 = f.verts[0];
        out.push_back(std::move(f));
      }
  }
  return out;
}

}  // namespace

std::vector<Face> faces(const Polytope& p, int k) {
  if (p.num_vertices() == 0) throw EmptyPolytope("faces of an empty polytope");
  if (k < 0) throw ValidationError("face dimension must be nonnegative");
  if (k > p.dim()) return {};
  switch (p.kind()) {
    case Polytope::Kind::kBox:
      return box_faces(p, k);
    case Polytope::Kind::kSimplex:
      return simplex_faces(p, k);
    case Polytope::Kind::kZonotope:
      return zonotope_faces(p, k);
    case Polytope::Kind::kProduct:
      return product_faces(p, k);
    case Polytope::Kind::kGeneric:
      break;
  }
  Lattice lat = build_generic_lattice(p, k);
  return lat.level[k];
}

double distance_to_hull(const Eigen::MatrixXd& v, const Eigen::VectorXd& p) {
  const int nv = static_cast<int>(v.cols());
  if (nv == 0) throw EmptyPolytope("distance to an empty hull");
  Eigen::MatrixXd q = v.colwise() - p;
  double scale = std::max(1.0, q.colwise().norm().maxCoeff());

  // Wolfe's minimum-norm-point algorithm over the columns of q.
  int start = 0;
  for (int j = 1; j < nv; ++j)
    if (q.col(j).squaredNorm() < q.col(start).squaredNorm()) start = j;
  std::vector<int> corral = {start};
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = q.col(start);

  for (int iter = 0; iter < 1000; ++iter) {
    int best = 0;
    double bestdot = x.dot(q.col(0));
    for (int j = 1; j < nv; ++j) {
      double dj = x.dot(q.col(j));
      if (dj < bestdot) {
        bestdot = dj;
        best = j;
      }
    }
    if (bestdot >= x.squaredNorm() - 1e-12 * scale * scale) break;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) break;
    corral.push_back(best);
    Eigen::VectorXd na(corral.size());
    na.head(alpha.size()) = alpha;
    na[alpha.size()] = 0.0;
    alpha = na;

    for (int inner = 0; inner < 200; ++inner) {
      const int s = static_cast<int>(corral.size());
      Eigen::MatrixXd sys(s + 1, s + 1);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) sys(i, j) = q.col(corral[i]).dot(q.col(corral[j]));
      sys.block(0, s, s, 1).setOnes();
      sys.block(s, 0, 1, s).setOnes();
      sys(s, s) = 0.0;
      rhs[s] = 1.0;
      Eigen::VectorXd sol = sys.colPivHouseholderQr().solve(rhs);
      Eigen::VectorXd beta = sol.head(s);
      if (beta.minCoeff() >= -1e-12) {
        alpha = beta;
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < s; ++i)
        if (beta[i] < alpha[i]) theta = std::min(theta, alpha[i] / (alpha[i] - beta[i]));
      alpha = alpha + theta * (beta - alpha);
      std::vector<int> nc;
      std::vector<double> nav;
      for (int i = 0; i < s; ++i)
        if (alpha[i] > 1e-12) {
          nc.push_back(corral[i]);
          nav.push_back(alpha[i]);
        }
      corral = nc;
      alpha = Eigen::Map<Eigen::VectorXd>(nav.data(), static_cast<int>(nav.size()));
      double total = alpha.sum();
      alpha /= total;
    }
    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) x += alpha[static_cast<int>(i)] * q.col(corral[i]);
  }
  return x.norm();
}

double hausdorff_distance(const Polytope& a, const Polytope& b) {
  if (a.num_vertices() == 0 || b.num_vertices() == 0)
    throw EmptyPolytope("hausdorff distance with an empty polytope");
  if (a.d() != b.d()) throw SizeMismatch("hausdorff distance across dimensions");
  double h = 0.0;
  for (int j = 0; j < a.num_vertices(); ++j)
    h = std::max(h, distance_to_hull(b.vertices(), a.vertex(j)));
  for (int j = 0; j < b.num_vertices(); ++j)
    h = std::max(h, distance_to_hull(a.vertices(), b.vertex(j)));
  return h;
}

double intrinsic_volume(const Polytope& p) {
  std::vector<Face> top = faces(p, p.dim());
  return top.empty() ? 0.0 : top[0].volume;
}

std::vector<Halfspace> facet_halfspaces(const Polytope& p) {
  if (p.dim() != p.d())
    throw ValidationError("facet halfspaces need a full-dimensional polytope");
  std::vector<Halfspace> out;
  for (const Face& f : faces(p, p.d() - 1)) {
    Eigen::VectorXd v0 = p.vertex(f.v0);
    Eigen::VectorXd normal;
    for (int w = 0; w < p.num_vertices(); ++w) {
      if (std::binary_search(f.verts.begin(), f.verts.end(), w)) continue;
      Eigen::VectorXd r = p.vertex(w) - v0;
      Eigen::VectorXd rp = r - f.basis * (f.basis.transpose() * r);
      if (rp.norm() > 1e-9 * p.scale()) {
        normal = -rp / rp.norm();
        break;
      }
    }
    if (normal.size() == 0) throw NumericalError("facet with no off-span vertex");
    out.push_back({normal, normal.dot(v0)});
  }
  return out;
}

Polytope intersect(const Polytope& a, const Polytope& b) {
  if (a.d() != b.d()) throw SizeMismatch("intersection across dimensions");
  const int d = a.d();
  std::vector<Halfspace> hs = facet_halfspaces(a);
  std::vector<Halfspace> hb = facet_halfspaces(b);
  hs.insert(hs.end(), hb.begin(), hb.end());
  const int n = static_cast<int>(hs.size());
  double big = 1.0;
  for (const Halfspace& h : hs) big = std::max(big, std::abs(h.offset));

  double combos = 1.0;
  for (int i = 0; i < d; ++i) combos *= static_cast<double>(n - i) / (i + 1);
  if (combos > 2e6) throw ValidationError("intersection enumeration too large");

  std::vector<Eigen::VectorXd> pts;
  std::vector<int> pick(d);
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == d) {
      Eigen::MatrixXd m(d, d);
      Eigen::VectorXd rhs(d);
      for (int i = 0; i < d; ++i) {
        m.row(i) = hs[pick[i]].normal.transpose();
        rhs[i] = hs[pick[i]].offset;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      lu.setThreshold(1e-9);
      if (lu.rank() < d) return;
      Eigen::VectorXd x = lu.solve(rhs);
      for (const Halfspace& h : hs)
        if (h.normal.dot(x) > h.offset + 1e-7 * big) return;
      for (const Eigen::VectorXd& y : pts)
        if ((y - x).norm() <= 1e-7 * big) return;
      pts.push_back(x);
      return;
    }
    for (int i = start; i < n; ++i) {
      pick[chosen] = i;
      rec(i + 1, chosen + 1);
    }
  };
  rec(0, 0);

  Eigen::MatrixXd v(d, static_cast<int>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) v.col(static_cast<int>(j)) = pts[j];
  return Polytope::from_vertices(a.ambient(), a.qn(), v);
}

}  // namespace hypervol
