#include "hypervol/weak_measure.hpp"

#include <cmath>

#include "hypervol/rng.hpp"

namespace hypervol {

namespace {

void check_density(int n, const Eigen::VectorXd& center, double r) {
  if (n <= 0) throw ValidationError("density dimension must be positive");
  if (center.size() != 4 * n) throw SizeMismatch("density center has wrong dimension");
  if (!(r > 0.0)) throw ValidationError("density radius must be positive");
}

// Coefficient of a degree-0 class.
double scalar_coefficient(const FormClass& w) {
  if (w.k() != 0) throw DegreeMismatch("cone measures pair with scalar densities only");
  double c = 0.0;
  for (const FormTerm& t : w.terms()) c += t.coef;
  return c;
}

}  // namespace

TestDensity scalar_bump(int n, const Eigen::VectorXd& center, double r, double height) {
  check_density(n, center, r);
  return TestDensity{FormClass::unit(n),
                     [center, r, height](const Eigen::VectorXd& x) {
                       double s2 = (x - center).squaredNorm() / (r * r);
                       if (s2 >= 1.0) return 0.0;
                       return height * std::exp(1.0 - 1.0 / (1.0 - s2));
                     },
                     center, r};
}

TestDensity ball_indicator(int n, const Eigen::VectorXd& center, double r) {
  check_density(n, center, r);
  return TestDensity{FormClass::unit(n),
                     [center, r](const Eigen::VectorXd& x) {
                       return (x - center).squaredNorm() <= r * r ? 1.0 : 0.0;
                     },
                     center, r};
}

PairEstimate pair_measure(const GridSample& mu, const TestDensity& psi) {
  const int d = static_cast<int>(mu.spec.box.rows());
  if (psi.support_center.size() != d) throw SizeMismatch("density dimension mismatch");
  const double h = mu.spec.spacing;
  Eigen::VectorXi cells_per_axis(d);
  for (int a = 0; a < d; ++a) {
    double len = mu.spec.box(a, 1) - mu.spec.box(a, 0);
    cells_per_axis[a] = std::max(1, static_cast<int>(std::ceil(len / h - 1e-12)));
  }
  double cellvol = std::pow(h, d);

  PairEstimate out;
  out.samples = static_cast<long>(mu.cells.size());
  Eigen::VectorXd x(d);
  for (const auto& [flat, w] : mu.cells) {
    std::int64_t rest = flat;
    for (int a = d - 1; a >= 0; --a) {
      std::int64_t idx = rest % cells_per_axis[a];
      rest /= cells_per_axis[a];
      x[a] = mu.spec.box(a, 0) + (static_cast<double>(idx) + 0.5) * h;
    }
    double s = psi.scalar(x);
    if (s == 0.0) continue;
    out.value += pair(w, psi.form) * s * cellvol;
  }
  return out;
}

PairEstimate pair_measure(const ConePieces& mu, const TestDensity& psi,
                          long samples_per_piece, std::uint64_t seed) {
  if (!std::isfinite(psi.support_radius))
    throw ValidationError("cone pairing needs a compactly supported density");
  if (psi.support_center.size() != mu.d) throw SizeMismatch("density dimension mismatch");
  if (samples_per_piece < 1) throw InsufficientSamples("cone pairing needs samples");
  const double coef = scalar_coefficient(psi.form);
  const double r2 = psi.support_radius * psi.support_radius;

  PairEstimate out;
  double var_total = 0.0;
  for (const ConePiece& piece : mu.pieces) {
    const NormalCone& c = piece.cone;
    if (c.span.rows() != mu.d) throw SizeMismatch("cone ambient dimension mismatch");
    if (c.m == 0) {
      // Point mass at the origin.
      double s = psi.scalar(Eigen::VectorXd::Zero(mu.d));
      out.value += piece.density * coef * s;
      continue;
    }
    Eigen::VectorXd cy = c.span.transpose() * psi.support_center;
    double off2 = (psi.support_center - c.span * cy).squaredNorm();
    double rho2 = r2 - off2;
    if (rho2 <= 0.0) continue;
    double rho = std::sqrt(rho2);
    double slice_vol = ball_volume(c.m) * std::pow(rho, c.m);

    Rng rng = make_rng(mix64(seed, c.content_hash));
    double sum = 0.0, sumsq = 0.0;
    Eigen::VectorXd y(c.m);
    for (long s = 0; s < samples_per_piece; ++s) {
      for (int i = 0; i < c.m; ++i) y[i] = normal(rng);
      y *= rho * std::pow(uniform(rng), 1.0 / c.m) / y.norm();
      y += cy;
      bool inside = c.rows.rows() == 0 || (c.rows * y).maxCoeff() <= 0.0;
      double val = inside ? psi.scalar(c.span * y) : 0.0;
      sum += val;
      sumsq += val * val;
    }
    double mean = sum / static_cast<double>(samples_per_piece);
    double w = piece.density * coef * slice_vol;
    out.value += w * mean;
    out.samples += samples_per_piece;
    if (samples_per_piece > 1) {
      double var = (sumsq - sum * mean) / static_cast<double>(samples_per_piece - 1);
      var_total += w * w * std::max(0.0, var) / static_cast<double>(samples_per_piece);
    }
  }
  out.se = std::sqrt(var_total);
  return out;
}

}  // namespace hypervol
