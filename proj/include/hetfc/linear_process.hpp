#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hetfc {

// Roots of c[0] + c[1] z + ... + c[d] z^d (Durand-Kerner iteration).
// Trailing zero coefficients are trimmed; degree 0 yields no roots.
std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs);

// Smallest root modulus; +inf for degree-0 polynomials.
double min_root_modulus(const std::vector<double>& coeffs);

// Stationary MA(infinity) filter x_t = sum_i alpha_i eps_{t-i}, alpha_0 = 1,
// truncated at lag L once the geometric tail bound drops below trunc_tol.
//
// Built from an ARMA spec with the sign convention
//   x_t = sum_i ar[i] x_{t-i-1} + eps_t + sum_j ma[j] eps_{t-j-1},
// i.e. a(z) = 1 - sum ar_i z^i applied to x and b(z) = 1 + sum ma_j z^j
// applied to eps, and alpha(z) = b(z) / a(z).
class LinearFilter {
 public:
  // Default: the identity filter (alpha = {1}), i.e. x_t = eps_t.
  LinearFilter() : alpha_{1.0}, trunc_tol_(1e-12) {}

  // Throws ModelError when a root of either polynomial is on or inside the
  // unit circle (margin 1e-8), or when truncation would exceed 1e5 lags.
  static LinearFilter from_arma(std::vector<double> ar, std::vector<double> ma,
                                double trunc_tol = 1e-12);

  const std::vector<double>& coeffs() const { return alpha_; }
  // Truncation lag L (coeffs() has L+1 entries).
  std::size_t truncation_length() const { return alpha_.size() - 1; }
  double truncation_tolerance() const { return trunc_tol_; }
  // Bound on sum_{i > L} |alpha_i| from the dominant-root geometric tail.
  double tail_bound() const { return tail_bound_; }
  const std::vector<double>& ar() const { return ar_; }
  const std::vector<double>& ma() const { return ma_; }

  // Coefficients beta_1..beta_m of the AR(infinity) form
  // x_t = sum_i beta_i x_{t-i} + eps_t.
  std::vector<double> ar_infinity(std::size_t m) const;

  // gamma(j) = sigma2 * sum_i alpha_i alpha_{i+j} for uncorrelated errors
  // with constant unconditional variance sigma2.
  double autocovariance(double sigma2, std::size_t j) const;

  // x_t = sum_{i=0}^{L} alpha_i errors[t + L - i]; output length is
  // errors.size() - L (the first L errors are pre-sample). Throws ModelError
  // when errors.size() <= L.
  std::vector<double> simulate(std::span<const double> errors) const;

 private:
  std::vector<double> alpha_;
  std::vector<double> ar_;
  std::vector<double> ma_;
  double trunc_tol_ = 0.0;
  double tail_bound_ = 0.0;
};

}  // namespace hetfc
