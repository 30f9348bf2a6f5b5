#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hetfc/innovations.hpp"
#include "hetfc/rng.hpp"

namespace hetfc {

enum class VolatilityKind { ApGarch, Sv, Constant };

// eps[t] = sqrt(sigma2[t]) * z[t] for every t, all length n (post burn-in).
struct ErrorPath {
  std::vector<double> eps;
  std::vector<double> sigma2;
  std::vector<double> z;
};

struct StationarityReport {
  bool ok = false;
  double margin = 0.0;
  // Monte Carlo standard error of the margin when E(|z|-lambda z)^mu had to
  // be estimated (power GARCH with mu != 2); 0 when closed-form.
  double margin_se = 0.0;
};

struct VarianceEstimate {
  double value = 0.0;
  double se = 0.0;     // 0 when closed-form
  bool exact = true;
};

// Conditional variance recursion for eps_t = sigma_t z_t.
//
// Power GARCH:
//   sigma_t^mu = phi0 + sum_i phi_i (|eps_{t-i}| - lambda_i eps_{t-i})^mu
//              + sum_j psi_j sigma_{t-j}^mu
// with plain GARCH the special case mu = 2, lambda = 0, and GJR-GARCH the
// special case mu = 2 with free lambda.
//
// SV: log sigma_t^2 is a Gaussian AR(p) process a0 + sum a_i log sigma_{t-i}^2 + v_t
// with v_t ~ N(0, v_var), independent of {z_t}.
class VolatilityModel {
 public:
  // Default: constant unit variance (i.i.d. errors).
  VolatilityModel() = default;

  static VolatilityModel garch(double phi0, std::vector<double> phi, std::vector<double> psi);
  static VolatilityModel gjr_garch(double phi0, std::vector<double> phi,
                                   std::vector<double> lambda, std::vector<double> psi);
  static VolatilityModel ap_garch(double phi0, std::vector<double> phi,
                                  std::vector<double> lambda, std::vector<double> psi,
                                  double mu);
  static VolatilityModel sv(double a0, std::vector<double> a, double v_var);
  static VolatilityModel constant(double sigma2);

  VolatilityKind kind() const { return kind_; }
  double power() const { return mu_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& lambda() const { return lambda_; }
  double phi0() const { return phi0_; }
  double sv_a0() const { return sv_a0_; }
  const std::vector<double>& sv_a() const { return sv_a_; }
  double sv_v_var() const { return sv_v_var_; }
  double constant_sigma2() const { return const_sigma2_; }

  // Power GARCH: margin = 1 - [sum phi_i E(|z|-lambda_i z)^mu + sum psi_j].
  // SV: margin = min root modulus of 1 - sum a_i z^i minus 1.
  StationarityReport check_stationarity(const InnovationDist& dist) const;

  // E eps_t^2. Closed form for mu = 2 GARCH variants, SV (log-normal mean)
  // and Constant; long-run Monte Carlo otherwise. Throws ModelError for
  // non-stationary models.
  VarianceEstimate unconditional_variance(const InnovationDist& dist) const;

  // Simulates n values after discarding burn_in steps. The recursion starts
  // from its unconditional state: power GARCH seeds sigma^mu at the
  // stationary mean of the sigma^mu recursion, SV draws the initial
  // log-volatility block exactly from its stationary Gaussian law.
  // Deterministic given (model, dist, stream). Throws ModelError when
  // sigma_t^2 exceeds 1e12 (near-explosive configuration).
  ErrorPath simulate_errors(const InnovationDist& dist, std::size_t n,
                            std::size_t burn_in, RngStream& stream) const;

  // E(|z| - lambda z)^mu; closed form 1 + lambda^2 when mu == 2 and z is
  // symmetric with unit variance, otherwise Monte Carlo with n_mc draws.
  static VarianceEstimate abs_power_moment(const InnovationDist& dist, double lambda,
                                           double mu, std::size_t n_mc = 1'000'000);

 private:
  void validate_apgarch() const;

  VolatilityKind kind_ = VolatilityKind::Constant;
  // power GARCH
  double phi0_ = 0.0;
  std::vector<double> phi_;
  std::vector<double> lambda_;
  std::vector<double> psi_;
  double mu_ = 2.0;
  // SV
  double sv_a0_ = 0.0;
  std::vector<double> sv_a_;
  double sv_v_var_ = 0.0;
  // Constant
  double const_sigma2_ = 1.0;
};

}  // namespace hetfc
