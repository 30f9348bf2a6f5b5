#include <doctest.h>

#include <cmath>

#include "hetfc/dgp.hpp"
#include "hetfc/errors.hpp"
#include "hetfc/population.hpp"
#include "hetfc/predictor.hpp"

using namespace hetfc;

namespace {
// The 6-point hand dataset used throughout: beta for J={1}, h=1 is
// (sum x_t x_{t+1}) / (sum x_t^2) over t = 1..5 = 21/19.
const std::vector<double> kHand{1.0, 2.0, 1.0, 3.0, 2.0, 4.0};
}  // namespace

TEST_CASE("subset spec validation") {
  CHECK_THROWS_AS((SubsetSpec{{}, 1}).validate(), ModelError);
  CHECK_THROWS_AS((SubsetSpec{{1, 1}, 1}).validate(), ModelError);
  CHECK_THROWS_AS((SubsetSpec{{2, 1}, 1}).validate(), ModelError);
  CHECK_THROWS_AS((SubsetSpec{{0}, 1}).validate(), ModelError);
  CHECK_THROWS_AS((SubsetSpec{{1}, 0}).validate(), ModelError);
  CHECK(SubsetSpec::ar(3, 2).contiguous());
  CHECK_FALSE((SubsetSpec{{1, 3}, 1}).contiguous());
  CHECK(SubsetSpec{{1, 3}, 1}.label() == "{1,3}");
}

TEST_CASE("noiseless AR(1) is recovered exactly") {
  std::vector<double> x(60);
  x[0] = 1.0;
  for (std::size_t t = 1; t < x.size(); ++t) x[t] = 0.7 * x[t - 1];
  const FitResult f = fit(x, SubsetSpec{{1}, 1});
  CHECK(f.beta[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(predict(f, x) == doctest::Approx(0.7 * x.back()).epsilon(1e-12));
  for (double r : residuals(f, x, 1)) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("hand dataset oracle") {
  SUBCASE("J = {1}, h = 1: beta = 21/19, prediction 84/19, last residual 34/19") {
    const FitResult f = fit(kHand, SubsetSpec{{1}, 1});
    CHECK(f.rows == 5);
    CHECK(f.beta[0] == doctest::Approx(21.0 / 19.0).epsilon(1e-14));
    CHECK(predict(f, kHand) == doctest::Approx(84.0 / 19.0).epsilon(1e-14));
    const auto res = residuals(f, kHand, 1);
    REQUIRE(res.size() == 5);
    CHECK(res.back() == doctest::Approx(4.0 - 42.0 / 19.0).epsilon(1e-14));
    CHECK(res.back() == doctest::Approx(34.0 / 19.0).epsilon(1e-14));
  }
  SUBCASE("J = {2}, h = 1 uses the lag-2 column only") {
    // rows t = 2..5: regressor x_{t-1}, target x_{t+1}
    // beta = (x1 x3 + x2 x4 + x3 x5 + x4 x6) / (x1^2 + .. + x4^2) = 21/15
    const FitResult f = fit(kHand, SubsetSpec{{2}, 1});
    CHECK(f.rows == 4);
    CHECK(f.beta[0] == doctest::Approx(21.0 / 15.0).epsilon(1e-14));
  }
  SUBCASE("zero coefficients predict zero") {
    FitResult f = fit(kHand, SubsetSpec{{1}, 1});
    f.beta[0] = 0.0;
    CHECK(predict(f, kHand) == 0.0);
  }
}

TEST_CASE("normal-equation orthogonality") {
  std::vector<double> x(400);
  for (std::size_t t = 0; t < x.size(); ++t)
    x[t] = std::sin(0.53 * t) + 0.25 * std::cos(1.7 * t) + 0.01 * (t % 7);
  const SubsetSpec spec{{1, 3}, 2};
  const FitResult f = fit(x, spec);
  const auto res = residuals(f, x, spec.max_lag());
  double scale = 0.0;
  std::vector<double> dot(spec.size(), 0.0);
  for (std::size_t i = 0; i < res.size(); ++i) {
    const std::size_t t = static_cast<std::size_t>(spec.max_lag()) - 1 + i;
    for (std::size_t a = 0; a < spec.size(); ++a) {
      const double xa = x[t + 1 - static_cast<std::size_t>(spec.lags[a])];
      dot[a] += xa * res[i];
      scale += std::abs(xa * res[i]);
    }
  }
  for (double d : dot) CHECK(std::abs(d) < 1e-9 * std::max(1.0, scale));
}

TEST_CASE("fit window honours a larger common max lag") {
  const FitResult own = fit(kHand, SubsetSpec{{1}, 1});
  const FitResult common = fit(kHand, SubsetSpec{{1}, 1}, 2);
  CHECK(own.rows == 5);
  CHECK(common.rows == 4);
  CHECK(common.window_max_lag == 2);
  // rows t = 2..5: beta = (x2 x3 + x3 x4 + x4 x5 + x5 x6)/(x2^2+..+x5^2) = 19/18
  CHECK(common.beta[0] == doctest::Approx(19.0 / 18.0).epsilon(1e-14));
}

TEST_CASE("fit is invariant to prepending data outside its window") {
  std::vector<double> x(300);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(0.31 * t) + 0.2 * (t % 4);
  const SubsetSpec spec{{1, 2}, 1};
  const FitResult a = fit(x, spec);
  // Same rows, explicit larger window over a longer series.
  std::vector<double> padded(50, 7.7);
  padded.insert(padded.end(), x.begin(), x.end());
  const FitResult b = fit(padded, spec, 52);
  CHECK(a.rows == b.rows);
  for (std::size_t i = 0; i < a.beta.size(); ++i)
    CHECK(a.beta[i] == doctest::Approx(b.beta[i]).epsilon(1e-12));
}

TEST_CASE("long-sample fit recovers the population projection at sqrt(n) rate") {
  DgpSpec dgp;
  dgp.filter = LinearFilter::from_arma({0.0, -0.5}, {});
  dgp.volatility = VolatilityModel::garch(0.4, {0.2}, {0.55});
  const double sigma2 = dgp.volatility.unconditional_variance(dgp.innovations).value;
  const AutocovFn gamma = [&](std::size_t j) { return dgp.filter.autocovariance(sigma2, j); };

  const SubsetSpec spec = SubsetSpec::ar(2, 1);
  const std::vector<double> beta_pop = projection(gamma, spec);
  CHECK(beta_pop[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(beta_pop[1] == doctest::Approx(-0.5).epsilon(1e-10));

  const std::size_t n = 100000;
  for (std::uint64_t seed : {101, 202, 303}) {
    RngStream stream(seed);
    const PathBundle p = simulate_path(dgp, n, stream);
    const FitResult f = fit(p.x, spec);
    double err = 0.0;
    for (std::size_t a = 0; a < spec.size(); ++a)
      err += (f.beta[a] - beta_pop[a]) * (f.beta[a] - beta_pop[a]);
    CHECK(std::sqrt(err) < 6.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(fit(std::vector<double>{1.0, 2.0, 3.0}, SubsetSpec{{1}, 1}), ModelError);
  const std::vector<double> constant(60, 1.0);
  CHECK_THROWS_AS(fit(constant, SubsetSpec{{1, 2}, 1}), ModelError);  // singular
  const FitResult f = fit(kHand, SubsetSpec{{1}, 1});
  CHECK_THROWS_AS(predict_at(f, kHand, 100), ModelError);
  CHECK_THROWS_AS(residuals(f, kHand, 0), ModelError);
}
