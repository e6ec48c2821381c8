#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nemato/rng.hpp"
#include "nemato/tensor.hpp"

using namespace nemato;

namespace {
Mat random_mat(CounterRng& rng, int n, double amp = 1.0) {
  Mat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = amp * rng.uniform(-1.0, 1.0);
  return m;
}

Mat random_posdet(CounterRng& rng, int n) {
  for (;;) {
    Mat m = Mat::identity(n) + random_mat(rng, n, 0.7);
    if (determinant(m) > 0.2) return m;
  }
}
}  // namespace

TEST_CASE("adjugate and determinant basics") {
  const Mat f(1.0, 2.0, 3.0, 4.0);
  const Mat a = adjugate(f);
  CHECK(a(0, 0) == 4.0);
  CHECK(a(0, 1) == -2.0);
  CHECK(a(1, 0) == -3.0);
  CHECK(a(1, 1) == 1.0);
  CHECK(determinant(Mat::identity(2)) == 1.0);
  CHECK(adjugate(Mat::identity(3)).max_abs() == 1.0);

  CounterRng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Mat F = random_mat(rng, 3, 2.0);
    const Mat lhs = F * adjugate(F) - determinant(F) * Mat::identity(3);
    CHECK(lhs.max_abs() < 1e-12 * std::max(1.0, std::abs(determinant(F))));
    // cof = adj^T
    CHECK((cofactor(F) - adjugate(F).transposed()).max_abs() == 0.0);
  }
}

TEST_CASE("inverse throws on singular input") {
  Mat f(1.0, 2.0, 2.0, 4.0);
  CHECK_THROWS_AS(inverse(f), std::domain_error);
  const Mat g(2.0, 1.0, 0.0, 1.0);
  const Mat gi = inverse(g);
  CHECK((g * gi - Mat::identity(2)).max_abs() < 1e-15);
}

TEST_CASE("minors vector") {
  const auto m2 = minors_vector(Mat::identity(2));
  REQUIRE(m2.size() == 5);
  CHECK(m2[0] == 1.0);
  CHECK(m2[1] == 0.0);
  CHECK(m2[2] == 0.0);
  CHECK(m2[3] == 1.0);
  CHECK(m2[4] == 1.0);

  const auto m3 = minors_vector(2.0 * Mat::identity(3));
  REQUIRE(m3.size() == 19);
  CHECK(m3.back() == 8.0);  // third-order minor

  // brute-force 2x2 submatrix determinants vs the cofactor entries
  CounterRng rng(5);
  const Mat F = random_mat(rng, 3, 1.5);
  const auto mv = minors_vector(F);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r[2], c[2], ri = 0, ci = 0;
      for (int k = 0; k < 3; ++k) {
        if (k != i) r[ri++] = k;
        if (k != j) c[ci++] = k;
      }
      const double minor = F(r[0], c[0]) * F(r[1], c[1]) - F(r[0], c[1]) * F(r[1], c[0]);
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      CHECK(mv[static_cast<size_t>(9 + 3 * i + j)] == doctest::Approx(sign * minor).epsilon(1e-13));
    }
}

TEST_CASE("director tensor") {
  const UnitVector e1 = UnitVector::axis(2, 0);
  // mu = 1 gives the identity for any z
  const auto d1 = director_tensor(UnitVector::normalized(Vec(1.0, 2.0)), 1.0);
  CHECK((d1.N - Mat::identity(2)).max_abs() < 1e-15);
  CHECK(director_mu1(1.0, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(director_mu2(1.0, 2) == doctest::Approx(std::sqrt(2.0)));

  const auto d2 = director_tensor(e1, 2.0);
  CHECK(d2.N(0, 0) == doctest::Approx(0.5));
  CHECK(d2.N(1, 1) == doctest::Approx(2.0));
  CHECK(d2.N(0, 1) == doctest::Approx(0.0));
  CHECK(determinant(d2.N) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((d2.N * d2.N_inv - Mat::identity(2)).max_abs() < 1e-14);

  CounterRng rng(9);
  for (double mu : {0.3, 1.7, 5.0}) {
    for (int n : {2, 3}) {
      Vec v = Vec::zero(n);
      for (int i = 0; i < n; ++i) v[i] = rng.normal();
      const UnitVector z = UnitVector::normalized(v);
      const auto d = director_tensor(z, mu);
      CHECK(determinant(d.N) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((d.N * d.N_inv - Mat::identity(n)).max_abs() < 1e-13);
      if (n == 2) {
        // Frobenius norms are exactly mu1, mu2 in 2D
        CHECK(d.N.norm() == doctest::Approx(director_mu1(mu, n)).epsilon(1e-12));
        CHECK(d.N_inv.norm() == doctest::Approx(director_mu2(mu, n)).epsilon(1e-12));
      } else {
        // mu1, mu2 bound the operator norms in any dimension
        for (int trial = 0; trial < 10; ++trial) {
          Vec w(rng.normal(), rng.normal(), rng.normal());
          CHECK((d.N * w).norm() <= director_mu1(mu, n) * w.norm() * (1.0 + 1e-12));
          CHECK((d.N_inv * w).norm() <= director_mu2(mu, n) * w.norm() * (1.0 + 1e-12));
        }
      }
    }
  }
  CHECK_THROWS_AS(director_tensor(e1, 0.0), std::domain_error);
}

TEST_CASE("adjugate multiplicativity with the director tensor") {
  CounterRng rng(123);
  for (int k = 0; k < 200; ++k) {
    const int n = (k % 2 == 0) ? 2 : 3;
    Vec v = Vec::zero(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    const UnitVector z = UnitVector::normalized(v);
    const auto d = director_tensor(z, 1.0 + rng.uniform(0.0, 3.0));
    const Mat F = random_mat(rng, n, 2.0);
    // adj(AB) = adj(B) adj(A), and adj(N^{-1}) = N since det N^{-1} = 1
    const Mat lhs = adjugate(d.N_inv * F);
    const Mat rhs = adjugate(F) * d.N;
    CHECK((lhs - rhs).max_abs() < 1e-12 * (1.0 + rhs.max_abs()));
    // determinant multiplicativity
    const Mat G = random_mat(rng, n, 2.0);
    CHECK(determinant(G * F) ==
          doctest::Approx(determinant(G) * determinant(F)).epsilon(1e-11));
  }
}

TEST_CASE("tensor differentials match finite differences") {
  CHECK(d_det(Mat::identity(2), Mat(1.0, 2.0, 3.0, 4.0)) == doctest::Approx(5.0));
  {
    const Mat B(1.0, 2.0, 3.0, 4.0);
    CHECK((d_inv(Mat::identity(2), B) + B).max_abs() < 1e-14);
  }
  CHECK_THROWS_AS(d_adj(Mat(1.0, 0.0, 0.0, -1.0), Mat::identity(2)), std::domain_error);

  CounterRng rng(77);
  const double h = 1e-6;
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = (k % 2 == 0) ? 2 : 3;
    const Mat A = random_posdet(rng, n);
    const Mat B = random_mat(rng, n, 1.0);
    const Mat Ap = A + h * B, Am = A - h * B;

    auto fd = [&](auto&& f) {
      auto diff = f(Ap) - f(Am);
      return (1.0 / (2.0 * h)) * diff;
    };
    const Mat fd_adj = fd([](const Mat& m) { return adjugate(m); });
    const Mat fd_cof = fd([](const Mat& m) { return cofactor(m); });
    const Mat fd_inv = fd([](const Mat& m) { return inverse(m); });
    const double fd_det = (determinant(Ap) - determinant(Am)) / (2.0 * h);

    auto rel = [](const Mat& got, const Mat& want) {
      return (got - want).norm() / std::max(1.0, want.norm());
    };
    CHECK(rel(d_adj(A, B), fd_adj) < 1e-5);
    CHECK(rel(d_cof(A, B), fd_cof) < 1e-5);
    CHECK(rel(d_inv(A, B), fd_inv) < 1e-5);
    CHECK(std::abs(d_det(A, B) - fd_det) / std::max(1.0, std::abs(fd_det)) < 1e-5);
    ++checked;
  }
  CHECK(checked == 1000);
}
