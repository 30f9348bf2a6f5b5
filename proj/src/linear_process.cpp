#include "hetfc/linear_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hetfc/errors.hpp"

namespace hetfc {

std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  const std::size_t degree = coeffs.size() - 1;
  std::vector<std::complex<double>> roots;
  if (coeffs.empty() || degree == 0) return roots;

  std::vector<std::complex<double>> monic(degree + 1);
  for (std::size_t i = 0; i <= degree; ++i) monic[i] = coeffs[i] / coeffs[degree];

  roots.resize(degree);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> power(1.0, 0.0);
  for (auto& r : roots) {
    power *= seed;
    r = power;
  }

  auto eval = [&](std::complex<double> z) {
    std::complex<double> v = monic[degree];
    for (std::size_t i = degree; i-- > 0;) v = v * z + monic[i];
    return v;
  };

  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (std::size_t j = 0; j < degree; ++j) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t m = 0; m < degree; ++m)
        if (m != j) denom *= roots[j] - roots[m];
      const std::complex<double> step = eval(roots[j]) / denom;
      roots[j] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < 1e-14) break;
  }
  return roots;
}

double min_root_modulus(const std::vector<double>& coeffs) {
  const auto roots = polynomial_roots(coeffs);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : roots) m = std::min(m, std::abs(r));
  return m;
}

namespace {

std::vector<double> to_poly_ar(const std::vector<double>& ar) {
  std::vector<double> p(ar.size() + 1, 0.0);
  p[0] = 1.0;
  for (std::size_t i = 0; i < ar.size(); ++i) p[i + 1] = -ar[i];
  return p;
}

std::vector<double> to_poly_ma(const std::vector<double>& ma) {
  std::vector<double> p(ma.size() + 1, 0.0);
  p[0] = 1.0;
  for (std::size_t i = 0; i < ma.size(); ++i) p[i + 1] = ma[i];
  return p;
}

void require_roots_outside(const std::vector<double>& poly, const char* which) {
  const double m = min_root_modulus(poly);
  if (!(m > 1.0 + 1e-8)) {
    std::ostringstream msg;
    msg << "linear filter: " << which
        << " polynomial has a root of modulus " << m
        << " on or inside the unit circle";
    throw ModelError(msg.str());
  }
}

}  // namespace

LinearFilter LinearFilter::from_arma(std::vector<double> ar, std::vector<double> ma,
                                     double trunc_tol) {
  while (!ar.empty() && ar.back() == 0.0) ar.pop_back();
  while (!ma.empty() && ma.back() == 0.0) ma.pop_back();
  if (!(trunc_tol > 0.0))
    throw ModelError("linear filter: trunc_tol must be > 0");

  require_roots_outside(to_poly_ar(ar), "AR");
  require_roots_outside(to_poly_ma(ma), "MA");

  const std::size_t p = ar.size();
  const std::size_t q = ma.size();

  LinearFilter f;
  f.ar_ = ar;
  f.ma_ = ma;
  f.trunc_tol_ = trunc_tol;

  // Decay rate of alpha_i beyond lag q: 1 / (smallest AR root modulus).
  const double rho = p == 0 ? 0.0 : 1.0 / min_root_modulus(to_poly_ar(ar));
  const double tail_factor = p == 0 ? 0.0 : rho / (1.0 - rho);

  constexpr std::size_t kMaxLag = 100'000;
  std::vector<double>& alpha = f.alpha_;
  alpha.clear();
  alpha.reserve(64);
  for (std::size_t i = 0;; ++i) {
    double v = i == 0 ? 1.0 : (i <= q ? ma[i - 1] : 0.0);
    for (std::size_t j = 1; j <= std::min<std::size_t>(i, p); ++j)
      v += ar[j - 1] * alpha[i - j];
    alpha.push_back(v);

    if (i < q) continue;
    if (p == 0) {  // pure MA: exact after lag q
      if (i == q) {
        f.tail_bound_ = 0.0;
        break;
      }
      continue;
    }
    double recent = 0.0;
    for (std::size_t j = alpha.size() - std::min(alpha.size(), p); j < alpha.size(); ++j)
      recent += std::abs(alpha[j]);
    const double bound = recent * tail_factor;
    if (bound < trunc_tol && std::abs(alpha.back()) < trunc_tol) {
      f.tail_bound_ = bound;
      break;
    }
    if (i >= kMaxLag) {
      std::ostringstream msg;
      msg << "linear filter: truncation would exceed " << kMaxLag
          << " lags at tolerance " << trunc_tol;
      throw ModelError(msg.str());
    }
  }
  return f;
}

std::vector<double> LinearFilter::ar_infinity(std::size_t m) const {
  // c(z) = a(z)/b(z); beta_i = -c_i for i >= 1.
  const std::size_t p = ar_.size();
  const std::size_t q = ma_.size();
  std::vector<double> c(m + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t i = 1; i <= m; ++i) {
    double v = i <= p ? -ar_[i - 1] : 0.0;
    for (std::size_t j = 1; j <= std::min<std::size_t>(i, q); ++j)
      v -= ma_[j - 1] * c[i - j];
    c[i] = v;
  }
  std::vector<double> beta(m);
  for (std::size_t i = 1; i <= m; ++i) beta[i - 1] = -c[i];
  return beta;
}

double LinearFilter::autocovariance(double sigma2, std::size_t j) const {
  if (j >= alpha_.size()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + j < alpha_.size(); ++i) s += alpha_[i] * alpha_[i + j];
  return sigma2 * s;
}

std::vector<double> LinearFilter::simulate(std::span<const double> errors) const {
  const std::size_t lag = truncation_length();
  if (errors.size() <= lag) {
    std::ostringstream msg;
    msg << "linear filter simulate: need more than " << lag
        << " errors (the first " << lag << " are pre-sample), got " << errors.size();
    throw ModelError(msg.str());
  }
  const std::size_t n = errors.size() - lag;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    double s = 0.0;
    const double* e = errors.data() + t;
    // alpha_[i] pairs with errors[t + lag - i].
    for (std::size_t i = 0; i <= lag; ++i) s += alpha_[i] * e[lag - i];
    x[t] = s;
  }
  return x;
}

}  // namespace hetfc
