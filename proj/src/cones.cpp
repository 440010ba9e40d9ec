#include "hypervol/cones.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypervol/lp.hpp"
#include "hypervol/rng.hpp"

namespace hypervol {

namespace {

std::vector<std::int64_t> rounded_key(const Eigen::VectorXd& u) {
  std::vector<std::int64_t> key(u.size());
  for (int i = 0; i < u.size(); ++i) key[i] = std::llround(u[i] * 1e7);
  return key;
}

void hash_int(std::uint64_t& h, std::int64_t v) { h = fnv1a(&v, sizeof(v), h); }

void hash_keys(std::uint64_t& h, std::vector<std::vector<std::int64_t>>& keys) {
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys)
    for (std::int64_t v : k) hash_int(h, v);
}

}  // namespace

NormalCone normal_cone(const Polytope& p, const Face& f, bool validate) {
  const int d = p.d();
  const int k = f.k;
  if (k > d || static_cast<int>(f.basis.cols()) != k)
    throw NotAFace("face basis does not match its dimension");
  const double tol = 1e-9 * p.scale();

  NormalCone c;
  c.k = k;
  c.m = d - k;
  if (c.m == 0) {
    c.span = Eigen::MatrixXd(d, 0);
    c.rows = Eigen::MatrixXd(0, 0);
  } else if (k == 0) {
    c.span = Eigen::MatrixXd::Identity(d, d);
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.basis);
    c.span = Eigen::MatrixXd(qr.householderQ()).rightCols(c.m);
  }

  Eigen::VectorXd v0 = p.vertex(f.v0);
  std::vector<Eigen::VectorXd> raw;
  std::vector<int> on_span;  // vertices outside f.verts but on its affine span
  for (int w = 0; w < p.num_vertices(); ++w) {
    if (std::binary_search(f.verts.begin(), f.verts.end(), w)) continue;
    if (c.m == 0) continue;
    Eigen::VectorXd rho = c.span.transpose() * (p.vertex(w) - v0);
    if (rho.norm() <= tol)
      on_span.push_back(w);
    else
      raw.push_back(rho / rho.norm());
  }

  if (validate && c.m > 0) {
    // A proper face must be strictly separable, and any extra vertex on its
    // affine span must sit inside its hull.
    if (!raw.empty()) {
      Eigen::MatrixXd rows(static_cast<int>(raw.size()), c.m);
      for (std::size_t i = 0; i < raw.size(); ++i) rows.row(static_cast<int>(i)) = raw[i];
      if (max_margin(rows) <= 1e-9) throw NotAFace("vertex set is not exposed");
    }
    if (!on_span.empty()) {
      Eigen::MatrixXd fv(d, static_cast<int>(f.verts.size()));
      for (std::size_t j = 0; j < f.verts.size(); ++j)
        fv.col(static_cast<int>(j)) = p.vertex(f.verts[j]);
      for (int w : on_span)
        if (distance_to_hull(fv, p.vertex(w)) > tol)
          throw NotAFace("coplanar vertex outside the face");
    }
  }

  // Dedupe directions, then strip rows implied by the rest (Farkas: an
  // inequality row is redundant iff it is a nonnegative combination of the
  // others).
  std::vector<Eigen::VectorXd> dirs;
  {
    std::vector<std::vector<std::int64_t>> seen;
    for (const Eigen::VectorXd& u : raw) {
      std::vector<std::int64_t> key = rounded_key(u);
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        seen.push_back(key);
        dirs.push_back(u);
      }
    }
  }
  std::vector<bool> active(dirs.size(), true);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    std::vector<Eigen::VectorXd> others;
    for (std::size_t j = 0; j < dirs.size(); ++j)
      if (j != i && active[j]) others.push_back(dirs[j]);
    if (others.empty()) break;
    Eigen::MatrixXd gens(static_cast<int>(others.size()), c.m);
    for (std::size_t j = 0; j < others.size(); ++j)
      gens.row(static_cast<int>(j)) = others[j].transpose();
    if (in_cone(gens, dirs[i])) active[i] = false;
  }
  int nrows = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (active[i]) ++nrows;
  c.rows = Eigen::MatrixXd(nrows, c.m);
  int r = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (active[i]) c.rows.row(r++) = dirs[i];

  // Content hash: face dimension, cone dimension, and the unit vertex
  // differences around the anchor, rounded and sorted. Unit vectors are
  // bitwise stable under translation and dyadic dilation, so congruent cones
  // from those transforms replay identical sample streams.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  hash_int(h, k);
  hash_int(h, c.m);
  std::vector<std::vector<std::int64_t>> off_keys, in_keys;
  for (int w = 0; w < p.num_vertices(); ++w) {
    if (w == f.v0) continue;
    Eigen::VectorXd diff = p.vertex(w) - v0;
    double nn = diff.norm();
    if (nn <= 0) continue;
    Eigen::VectorXd u = diff / nn;
    if (std::binary_search(f.verts.begin(), f.verts.end(), w))
      in_keys.push_back(rounded_key(u));
    else
      off_keys.push_back(rounded_key(u));
  }
  hash_int(h, static_cast<std::int64_t>(in_keys.size()));
  hash_keys(h, in_keys);
  hash_int(h, static_cast<std::int64_t>(off_keys.size()));
  hash_keys(h, off_keys);
  c.content_hash = h;
  return c;
}

double ball_volume(int m) {
  return std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

Angle exterior_angle(const NormalCone& c, std::int64_t samples, std::uint64_t seed) {
  if (c.m == 0) throw DegenerateCone("exterior angle of a zero-dimensional cone");
  Angle a;
  const int nr = static_cast<int>(c.rows.rows());
  if (nr == 0) {
    a.gamma = 1.0;
    a.exact = true;
    return a;
  }

  // Quotient out the lineality space: work in the row space, where the cone
  // is pointed. The Gaussian factorizes, so the fraction is unchanged.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.rows, Eigen::ComputeFullV);
  double top = svd.singularValues()[0];
  int s = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-9 * top) ++s;
  Eigen::MatrixXd red = c.rows * svd.matrixV().leftCols(s);  // unit rows again

  if (s == 1) {
    bool pos = false, neg = false;
    for (int i = 0; i < nr; ++i) (red(i, 0) > 0 ? pos : neg) = true;
    a.gamma = (pos && neg) ? 0.0 : 0.5;
    a.exact = true;
    return a;
  }
  if (nr == s) {
    bool orth = true;
    for (int i = 0; i < nr && orth; ++i)
      for (int j = i + 1; j < nr && orth; ++j)
        if (std::abs(red.row(i).dot(red.row(j))) > 1e-9) orth = false;
    if (orth) {
      a.gamma = std::ldexp(1.0, -s);
      a.exact = true;
      return a;
    }
  }
  if (s == 2) {
    // Planar wedge: intersect the admissible half-circles around an interior
    // direction.
    Eigen::VectorXd y;
    double eps = max_margin(red, &y);
    if (eps <= 1e-12) {
      a.gamma = 0.0;
      a.exact = true;
      return a;
    }
    double phi = std::atan2(y[1], y[0]);
    double lo = -M_PI, hi = M_PI;
    for (int i = 0; i < nr; ++i) {
      double ci = phi - std::atan2(red(i, 1), red(i, 0));
      ci -= 2 * M_PI * std::floor(ci / (2 * M_PI));  // wrap to [0, 2pi)
      lo = std::max(lo, M_PI / 2 - ci);
      hi = std::min(hi, 3 * M_PI / 2 - ci);
    }
    a.gamma = std::max(hi - lo, 0.0) / (2 * M_PI);
    a.exact = true;
    return a;
  }

  if (samples < 1) throw InsufficientSamples("exterior angle sampling needs samples >= 1");
  Rng rng = make_rng(mix64(seed, c.content_hash));
  std::int64_t acc = 0;
  Eigen::VectorXd y(s);
  for (std::int64_t it = 0; it < samples; ++it) {
    for (int i = 0; i < s; ++i) y[i] = normal(rng);
    if ((red * y).maxCoeff() <= 0.0) ++acc;
  }
  double phat = static_cast<double>(acc) / static_cast<double>(samples);
  a.gamma = phat;
  a.se = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  a.samples = samples;
  return a;
}

}  // namespace hypervol
