#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypervol/forms.hpp"
#include "hypervol/rng.hpp"

using namespace hypervol;

namespace {

FormClass power(const HyperHermitian& a, int n, int k, double coef = 1.0) {
  return FormClass::monomial(n, coef, std::vector<HyperHermitian>(k, a));
}

long binom(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

QVector unit_qvec(int n, int i) {
  QVector v(n, Quaternion());
  v[i] = Quaternion::real(1.0);
  return v;
}

}  // namespace

TEST_CASE("pairing normalization on identity powers") {
  for (int n : {1, 2, 3})
    for (int k = 0; k <= n; ++k) {
      HyperHermitian id = HyperHermitian::identity(n);
      CHECK(pair(power(id, n, k), power(id, n, n - k)) == doctest::Approx(1.0));
    }
}

TEST_CASE("pairing of matching powers recovers the moore determinant") {
  Rng rng = make_rng(11);
  for (int n : {2, 3})
    for (int k = 0; k <= n; ++k) {
      HyperHermitian a = random_hyperhermitian(n, rng);
      CHECK(pair(power(a, n, k), power(a, n, n - k)) ==
            doctest::Approx(moore_det(a)).epsilon(1e-9));
    }
}

TEST_CASE("diagonal projector pairing is one half") {
  Eigen::VectorXd d1(2), d2(2);
  d1 << 1, 0;
  d2 << 0, 1;
  FormClass w = FormClass::matrix(1.0, HyperHermitian::diagonal(d1));
  FormClass e = FormClass::matrix(1.0, HyperHermitian::diagonal(d2));
  CHECK(pair(w, e) == doctest::Approx(0.5));
}

TEST_CASE("pairing validates degrees") {
  HyperHermitian id = HyperHermitian::identity(2);
  CHECK_THROWS_AS(pair(power(id, 2, 1), power(id, 2, 2)), DegreeMismatch);
  CHECK_THROWS_AS(product(power(id, 2, 1), power(id, 2, 2)), DegreeOverflow);
}

TEST_CASE("product with the unit is the identity map") {
  Rng rng = make_rng(12);
  HyperHermitian a = random_hyperhermitian(2, rng);
  FormClass w = FormClass::matrix(2.5, a);
  FormClass p = product(w, FormClass::unit(2));
  REQUIRE(p.k() == 1);
  FormClass diff = p + w.scaled(-1.0);
  CHECK(equal_zero(diff, 99));
}

TEST_CASE("product chains pair back to the moore determinant") {
  Rng rng = make_rng(13);
  HyperHermitian a = random_hyperhermitian(3, rng);
  FormClass aa = product(FormClass::matrix(1.0, a), FormClass::matrix(1.0, a));
  CHECK(pair(aa, power(a, 3, 1)) == doctest::Approx(moore_det(a)).epsilon(1e-9));
}

TEST_CASE("squares of quaternionic rank-one classes vanish") {
  Rng rng = make_rng(14);
  for (int rep = 0; rep < 5; ++rep) {
    QVector v = random_qvector(2, rng);
    FormClass vv = FormClass::matrix(1.0, HyperHermitian(outer(v, v)));
    FormClass sq = product(vv, vv);
    CHECK(pair(sq, FormClass::unit(2)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(equal_zero(sq, 1000 + rep));
  }
}

TEST_CASE("product is associative as a pairing class") {
  Rng rng = make_rng(15);
  HyperHermitian a = random_hyperhermitian(3, rng);
  HyperHermitian b = random_hyperhermitian(3, rng);
  HyperHermitian c = random_hyperhermitian(3, rng);
  FormClass fa = FormClass::matrix(1.0, a), fb = FormClass::matrix(1.0, b),
            fc = FormClass::matrix(1.0, c);
  FormClass left = product(product(fa, fb), fc);
  FormClass right = product(fa, product(fb, fc));
  FormClass swapped = product(product(fb, fa), fc);
  CHECK(equal_zero(left + right.scaled(-1.0), 5));
  CHECK(equal_zero(left + swapped.scaled(-1.0), 6));
}

TEST_CASE("gram rank matches the representation dimension") {
  CHECK(gram_rank(1, 0, 4, 1) == 1);
  CHECK(gram_rank(1, 1, 4, 2) == 1);
  CHECK(gram_rank(2, 0, 4, 3) == 1);
  CHECK(gram_rank(2, 1, 10, 4) == 6);
  CHECK(gram_rank(2, 2, 4, 5) == 1);
  CHECK(gram_rank(3, 0, 4, 6) == 1);
  CHECK(gram_rank(3, 1, 20, 7) == 15);
  CHECK(gram_rank(3, 2, 20, 8) == 15);
  CHECK(gram_rank(3, 3, 4, 9) == 1);
}

TEST_CASE("gram rank requires enough samples") {
  CHECK_THROWS_AS(gram_rank(2, 1, 5, 1), InsufficientSamples);
}

TEST_CASE("identity powers certify strong") {
  for (int n : {2, 3})
    for (int k = 0; k <= n; ++k) {
      FormClass w = power(HyperHermitian::identity(n), n, k);
      PositivityCertificate cert = certify_positivity(w, 20, 1);
      CHECK(cert.kind == PositivityCertificate::Kind::kStrong);
    }
}

TEST_CASE("degree one certificates reconstruct or refute") {
  Rng rng = make_rng(16);
  SUBCASE("nonnegative matrix reconstructs") {
    HyperHermitian m = random_nonneg(3, 3, rng);
    FormClass w = FormClass::matrix(1.0, m);
    PositivityCertificate cert = certify_positivity(w, 0, 2);
    REQUIRE(cert.kind == PositivityCertificate::Kind::kStrong);
    FormClass rec = cert.reconstruct(3, 1);
    CHECK(equal_zero(w + rec.scaled(-1.0), 77));
  }
  SUBCASE("indefinite diagonal yields a negative witness") {
    Eigen::VectorXd d(3);
    d << 1, -1, 0;
    FormClass w = FormClass::matrix(1.0, HyperHermitian::diagonal(d));
    PositivityCertificate cert = certify_positivity(w, 0, 3);
    REQUIRE(cert.kind == PositivityCertificate::Kind::kIndefinite);
    REQUIRE(cert.witness.has_value());
    CHECK(cert.violation < -1e-6);
    CHECK(pair(w, *cert.witness) == doctest::Approx(cert.violation));
    // The witness itself is strongly positive.
    PositivityCertificate wc = certify_positivity(*cert.witness, 50, 4);
    CHECK(wc.kind == PositivityCertificate::Kind::kStrong);
  }
}

TEST_CASE("top minus one degree goes through the trace dual") {
  Rng rng = make_rng(17);
  for (int n : {2, 3}) {
    QVector v = random_qvector(n, rng);
    double nv = std::sqrt(dot(v, v).t);
    for (Quaternion& c : v) c = c * (1.0 / nv);
    QMatrix proj = QMatrix::identity(n) - outer(v, v);
    FormClass w = power(HyperHermitian(proj), n, n - 1);

    HyperHermitian dual = trace_dual_representative(w);
    // adjugate of a rank-(n-1) projector is the complementary rank-one over n.
    QMatrix expect = outer(v, v).scaled(1.0 / n);
    CHECK((dual.m() - expect).frobenius_norm() < 1e-9);

    PositivityCertificate cert = certify_positivity(w, 0, 5);
    REQUIRE(cert.kind == PositivityCertificate::Kind::kStrong);
    FormClass rec = cert.reconstruct(n, n - 1);
    CHECK(equal_zero(w + rec.scaled(-1.0), 88));

    PositivityCertificate neg = certify_positivity(w.scaled(-1.0), 0, 6);
    REQUIRE(neg.kind == PositivityCertificate::Kind::kIndefinite);
    CHECK(neg.violation < 0);
    CHECK(neg.witness->k() == 1);
  }
}

TEST_CASE("exact and sampled positivity agree on seeded inputs") {
  SUBCASE("degree one") {
    Rng rng = make_rng(500);
    int strong = 0, indef = 0;
    for (int rep = 0; rep < 500; ++rep) {
      HyperHermitian m = random_hyperhermitian(3, rng);
      double tol = 1e-10 * std::max(m.frobenius_norm(), 1e-300);
      bool psd = is_nonneg_definite(m, tol);
      PositivityCertificate cert = certify_positivity(FormClass::matrix(1.0, m), 0, rep);
      if (psd) {
        CHECK(cert.kind == PositivityCertificate::Kind::kStrong);
        ++strong;
      } else {
        REQUIRE(cert.kind == PositivityCertificate::Kind::kIndefinite);
        CHECK(cert.violation < 0);  // the sampled violation realizes the decision
        ++indef;
      }
    }
    CHECK(indef > 0);  // random G + G* is almost never definite, but keep both
  }
  SUBCASE("degree n minus one") {
    Rng rng = make_rng(501);
    for (int rep = 0; rep < 500; ++rep) {
      HyperHermitian b = random_hyperhermitian(3, rng);
      FormClass w = power(b, 3, 2);
      HyperHermitian dual = trace_dual_representative(w);
      double tol = 1e-10 * std::max(dual.frobenius_norm(), 1e-300);
      bool psd = is_nonneg_definite(dual, tol);
      PositivityCertificate cert = certify_positivity(w, 0, rep);
      if (psd)
        CHECK(cert.kind == PositivityCertificate::Kind::kStrong);
      else {
        REQUIRE(cert.kind == PositivityCertificate::Kind::kIndefinite);
        CHECK(cert.violation < 0);
      }
    }
  }
}

TEST_CASE("strong classes pass the sampled weak test") {
  // Middle degree (n=4, k=2): randomized certificate only.
  Rng rng = make_rng(42);
  FormClass w(4, 2,
              {FormTerm{1.0, {random_nonneg(4, 2, rng), random_nonneg(4, 2, rng)}},
               FormTerm{0.5, {random_nonneg(4, 2, rng), random_nonneg(4, 2, rng)}}});
  PositivityCertificate cert = certify_positivity(w, 40, 7);
  CHECK(cert.kind == PositivityCertificate::Kind::kWeak);

  PositivityCertificate neg = certify_positivity(w.scaled(-1.0), 40, 8);
  REQUIRE(neg.kind == PositivityCertificate::Kind::kIndefinite);
  CHECK(neg.violation < 0);
}

TEST_CASE("products of strong classes certify strong") {
  Rng rng = make_rng(43);
  FormClass a = FormClass::matrix(1.0, random_nonneg(3, 2, rng));
  FormClass b = FormClass::matrix(1.0, random_nonneg(3, 2, rng));
  FormClass p = product(a, b);  // degree 2 = n-1 for n=3: exact dual decision
  PositivityCertificate cert = certify_positivity(p, 0, 9);
  CHECK(cert.kind == PositivityCertificate::Kind::kStrong);
}

TEST_CASE("degree zero and n scalars") {
  PositivityCertificate c0 = certify_positivity(FormClass::unit(2, 3.0), 0, 1);
  CHECK(c0.kind == PositivityCertificate::Kind::kStrong);
  PositivityCertificate c1 = certify_positivity(FormClass::unit(2, -3.0), 0, 1);
  REQUIRE(c1.kind == PositivityCertificate::Kind::kIndefinite);
  CHECK(c1.violation == doctest::Approx(-3.0));

  Eigen::VectorXd d(2);
  d << 2, 1;
  FormClass top = power(HyperHermitian::diagonal(d), 2, 2);
  PositivityCertificate c2 = certify_positivity(top, 0, 1);
  CHECK(c2.kind == PositivityCertificate::Kind::kStrong);
  PositivityCertificate c3 = certify_positivity(top.scaled(-1.0), 0, 1);
  CHECK(c3.kind == PositivityCertificate::Kind::kIndefinite);
}

TEST_CASE("rank one diagonal basis sanity") {
  // sum_i e_i e_i^* reconstructs the identity.
  QMatrix acc(2);
  for (int i = 0; i < 2; ++i) {
    QVector e = unit_qvec(2, i);
    acc = acc + outer(e, e);
  }
  CHECK((acc - QMatrix::identity(2)).frobenius_norm() == doctest::Approx(0.0));
}
