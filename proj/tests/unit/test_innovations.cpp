#include <doctest.h>

#include <cmath>
#include <vector>

#include "hetfc/innovations.hpp"
#include "hetfc/rng.hpp"
#include "support/oracles.hpp"

using namespace hetfc;

namespace {

std::vector<double> draw(const InnovationDist& d, std::size_t n, std::uint64_t seed) {
  RngStream s(seed);
  std::vector<double> out(n);
  for (double& v : out) v = d.sample(s);
  return out;
}

struct Moments {
  double mean, var, m4;
};

Moments moments(const std::vector<double>& x) {
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  const double n = static_cast<double>(x.size());
  return {m1 / n, m2 / n - (m1 / n) * (m1 / n), m4 / n};
}

}  // namespace

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(InnovationDist::normalized_t(2.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationDist::normalized_t(1.5), std::invalid_argument);
  CHECK_THROWS_AS(InnovationDist::sym_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationDist::sym_gamma(1.0), std::invalid_argument);
  CHECK_NOTHROW(InnovationDist::normalized_t(2.1));
  CHECK_NOTHROW(InnovationDist::sym_gamma(0.5));
}

TEST_CASE("all three laws are standardized (mean 0, variance 1)") {
  const std::size_t n = 1'000'000;
  SUBCASE("standard normal") {
    const Moments m = moments(draw(InnovationDist::std_normal(), n, 1));
    CHECK(std::abs(m.mean) < 0.005);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("normalized t, nu = 5") {
    const InnovationDist d = InnovationDist::normalized_t(5.0);
    CHECK(d.standardization() == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(d.standardization() == doctest::Approx(1.29099).epsilon(1e-5));
    const Moments m = moments(draw(d, n, 2));
    CHECK(std::abs(m.mean) < 0.01);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("symmetric gamma, xi = 0.5") {
    const Moments m = moments(draw(InnovationDist::sym_gamma(0.5), n, 3));
    CHECK(std::abs(m.mean) < 0.005);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("densities: known values") {
  CHECK(InnovationDist::std_normal().density(0.0) ==
        doctest::Approx(0.3989422804).epsilon(1e-9));

  // Raw-scale symmetric gamma density at delta, and the bound constant
  // delta^{xi-1}/Gamma(xi) dominating g(delta) + g(-delta).
  const double xi = 0.7;
  const InnovationDist g = InnovationDist::sym_gamma(xi);
  for (double delta : {0.1, 0.5, 1.0}) {
    const double expected =
        std::pow(delta, xi - 1.0) * std::exp(-delta) / (2.0 * std::tgamma(xi));
    CHECK(g.density(delta) == doctest::Approx(expected).epsilon(1e-12));
    const double bound = std::pow(delta, xi - 1.0) / std::tgamma(xi);
    CHECK(g.density(delta) + g.density(-delta) <= bound + 1e-15);
  }
  CHECK_THROWS_AS(g.density(0.0), std::domain_error);

  // Normalized t at 0 equals sigma_nu * J(0).
  const double nu = 5.0;
  const InnovationDist t = InnovationDist::normalized_t(nu);
  const double j0 = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
                    std::sqrt(nu * M_PI);
  CHECK(t.density(0.0) == doctest::Approx(std::sqrt(nu / (nu - 2.0)) * j0).epsilon(1e-12));
}

TEST_CASE("densities integrate to one") {
  SUBCASE("normal") {
    const InnovationDist d = InnovationDist::std_normal();
    const double total =
        oracles::integrate([&](double x) { return d.density(x); }, -40.0, 40.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("normalized t") {
    const InnovationDist d = InnovationDist::normalized_t(5.0);
    const double total =
        oracles::integrate([&](double x) { return d.density(x); }, -2000.0, 2000.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("symmetric gamma (integrable singularity at zero)") {
    const double xi = 0.5;
    const InnovationDist d = InnovationDist::sym_gamma(xi);
    // 2 * int_0^inf g = 2 * [ int_0^1 via u = x^xi + int_1^60 direct ].
    const double near0 = oracles::integrate(
        [&](double u) {
          const double x = std::pow(u, 1.0 / xi);
          return d.density(x) * std::pow(u, 1.0 / xi - 1.0) / xi;
        },
        1e-12, 1.0);
    const double rest =
        oracles::integrate([&](double x) { return d.density(x); }, 1.0, 60.0);
    CHECK(2.0 * (near0 + rest) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("densities are symmetric and monotone on the stated ranges") {
  const InnovationDist laws[] = {InnovationDist::std_normal(),
                                 InnovationDist::normalized_t(4.0),
                                 InnovationDist::sym_gamma(0.3)};
  for (const auto& d : laws)
    for (double x : {0.1, 0.7, 1.3, 2.9, 7.5})
      CHECK(d.density(x) == doctest::Approx(d.density(-x)).epsilon(1e-14));

  // Non-increasing on x > 0 for normal and t; for the symmetric gamma only
  // beyond x = 1 (the magnitude density is unimodal with the singular mode
  // at zero when xi < 1).
  auto non_increasing = [](const InnovationDist& d, double from) {
    double prev = d.density(from);
    for (double x = from + 0.05; x < 30.0; x += 0.05) {
      const double cur = d.density(x);
      if (cur > prev + 1e-14) return false;
      prev = cur;
    }
    return true;
  };
  CHECK(non_increasing(InnovationDist::std_normal(), 1e-9));
  CHECK(non_increasing(InnovationDist::normalized_t(4.0), 1e-9));
  CHECK(non_increasing(InnovationDist::sym_gamma(0.3), 1.0));
}

TEST_CASE("empirical CDF matches the analytic law (KS < 0.002 at n = 1e6)") {
  const std::size_t n = 1'000'000;
  SUBCASE("normal") {
    const double ks = oracles::ks_statistic(draw(InnovationDist::std_normal(), n, 11),
                                            [](double x) { return oracles::normal_cdf(x); });
    CHECK(ks < 0.002);
  }
  SUBCASE("normalized t") {
    const double nu = 5.0;
    const double ks =
        oracles::ks_statistic(draw(InnovationDist::normalized_t(nu), n, 12),
                              [&](double x) { return oracles::normalized_t_cdf(x, nu); });
    CHECK(ks < 0.002);
  }
  SUBCASE("symmetric gamma") {
    const double xi = 0.5;
    const double ks =
        oracles::ks_statistic(draw(InnovationDist::sym_gamma(xi), n, 13),
                              [&](double x) { return oracles::sym_gamma_cdf(x, xi); });
    CHECK(ks < 0.002);
  }
}
