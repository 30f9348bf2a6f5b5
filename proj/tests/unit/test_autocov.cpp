#include <doctest.h>

#include <cmath>

#include "hetfc/autocov.hpp"
#include "hetfc/errors.hpp"

using namespace hetfc;

TEST_CASE("sample autocovariance on constructed inputs") {
  SUBCASE("constant series is rank one") {
    const std::vector<double> x(50, 3.0);
    const auto r = sample_autocov(x, 3);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) CHECK(r.entries(a, b) == doctest::Approx(9.0));
    CHECK(std::abs(min_eigenvalue(r)) < 1e-8);
    CHECK(min_eigenvalue(r) >= -1e-10);
  }
  SUBCASE("k = 1 is the mean of squares over rows k..n-1") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto r = sample_autocov(x, 1);
    // rows use x_1..x_3 (the last observation enters only h-step variants)
    CHECK(r.entries(0, 0) == doctest::Approx((1.0 + 4.0 + 9.0) / 3.0));
  }
  SUBCASE("h = 1 HStep equals Plain") {
    std::vector<double> x(40);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(1.1 * i) + 0.3 * (i % 3);
    const auto plain = sample_autocov(x, 3, AutocovVariant::Plain);
    const auto hstep = sample_autocov(x, 3, AutocovVariant::HStep, 1);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        CHECK(plain.entries(a, b) == doctest::Approx(hstep.entries(a, b)).epsilon(1e-15));
  }
  SUBCASE("HStep drops the last h-1 rows") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const auto h2 = sample_autocov(x, 1, AutocovVariant::HStep, 2);
    CHECK(h2.entries(0, 0) == doctest::Approx((1.0 + 4.0 + 9.0 + 16.0) / 4.0));
  }
  SUBCASE("gram structure keeps the minimum eigenvalue non-negative") {
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::sin(0.37 * i) * (1.0 + 0.2 * ((i * 7) % 5));
    for (std::size_t k : {1, 2, 5, 8})
      CHECK(min_eigenvalue(sample_autocov(x, k)) >= -1e-10);
  }
  SUBCASE("sample too short") {
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(sample_autocov(x, 2), ModelError);
  }
}

TEST_CASE("i.i.d. unit-variance series gives near-identity matrices") {
  DgpSpec dgp;  // identity filter, constant unit variance, standard normal
  RngStream stream(99);
  const PathBundle p = simulate_path(dgp, 100000, stream);
  const auto r = sample_autocov(p.x, 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(std::abs(r.entries(a, b) - (a == b ? 1.0 : 0.0)) < 0.02);
}

TEST_CASE("scalar inverse moment: E[(mean of x^2)^{-2}] near 1 for i.i.d. data") {
  DgpSpec dgp;
  const std::vector<std::size_t> grid{1000};
  const auto sweep = negative_moment_sweep(dgp, 1, 2.0, grid, 400, 2024, 2);
  REQUIRE(sweep.rows.size() == 1);
  CHECK(sweep.rows[0].nonfinite == 0);
  // (chi^2_n / n)^{-2} has mean n^2/((n-2)(n-4)) = 1 + O(1/n).
  CHECK(sweep.rows[0].mean > 0.95);
  CHECK(sweep.rows[0].mean < 1.10);
}

TEST_CASE("sweep is deterministic and worker-count independent") {
  DgpSpec dgp;
  const std::vector<std::size_t> grid{100, 200};
  const auto s1 = negative_moment_sweep(dgp, 2, 1.0, grid, 60, 7, 1);
  const auto s2 = negative_moment_sweep(dgp, 2, 1.0, grid, 60, 7, 4);
  REQUIRE(s1.rows.size() == s2.rows.size());
  for (std::size_t i = 0; i < s1.rows.size(); ++i) {
    CHECK(s1.rows[i].mean == s2.rows[i].mean);
    CHECK(s1.rows[i].se == s2.rows[i].se);
  }
  CHECK(s1.loglog_slope == s2.loglog_slope);
}
