#include <doctest.h>

#include <cmath>

#include "hetfc/linalg.hpp"
#include "hetfc/rng.hpp"
#include "support/oracles.hpp"

using namespace hetfc;

TEST_CASE("jacobi on tiny known matrices") {
  Matrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 5.0;
  CHECK(jacobi_eigenvalues(d).front() == doctest::Approx(2.0));

  Matrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  const auto eig = jacobi_eigenvalues(m);
  CHECK(eig[0] == doctest::Approx(1.0));
  CHECK(eig[1] == doctest::Approx(3.0));
}

TEST_CASE("jacobi matches the bisection oracle on 100 random symmetric matrices") {
  RngStream s(314);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rep % 7;  // up to 8x8
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        a(i, j) = 2.0 * s.uniform() - 1.0;
        a(j, i) = a(i, j);
      }
    const double jacobi_min = jacobi_eigenvalues(a).front();
    const double bisect_min = oracles::bisect_min_eigenvalue(a);
    CHECK(std::abs(jacobi_min - bisect_min) < 1e-9);
  }
}

TEST_CASE("cholesky solve matches a hand inverse") {
  Matrix a(2, 2);
  a(0, 0) = 4.0;
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 3.0;
  const CholeskyFactor f = cholesky(a);
  REQUIRE(f.ok);
  const std::vector<double> b{1.0, 2.0};
  const std::vector<double> x = f.solve(b);
  // inverse of [[4,1],[1,3]] is [[3,-1],[-1,4]]/11
  CHECK(x[0] == doctest::Approx((3.0 * 1.0 - 1.0 * 2.0) / 11.0));
  CHECK(x[1] == doctest::Approx((-1.0 * 1.0 + 4.0 * 2.0) / 11.0));
}

TEST_CASE("cholesky rejects an indefinite matrix") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 1.0;
  CHECK_FALSE(cholesky(a).ok);
}

TEST_CASE("trace_solve computes tr(A^{-1} B)") {
  Matrix a(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  Matrix b(2, 2);
  b(0, 0) = 6.0;
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  b(1, 1) = 8.0;
  const CholeskyFactor f = cholesky(a);
  CHECK(trace_solve(f, b) == doctest::Approx(6.0 / 2.0 + 8.0 / 4.0));
}

TEST_CASE("condition number of a diagonal matrix") {
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 10.0;
  a(2, 2) = 100.0;
  CHECK(condition_number(a) == doctest::Approx(100.0));
}
