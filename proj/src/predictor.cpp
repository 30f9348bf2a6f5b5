#include "hetfc/predictor.hpp"

#include <algorithm>
#include <sstream>

#include "hetfc/errors.hpp"

namespace hetfc {

SubsetSpec SubsetSpec::ar(int k, int h) {
  SubsetSpec s;
  s.lags.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) s.lags[static_cast<std::size_t>(i)] = i + 1;
  s.horizon = h;
  s.validate();
  return s;
}

void SubsetSpec::validate() const {
  if (lags.empty()) throw ModelError("subset spec: lag set must be non-empty");
  if (horizon < 1) throw ModelError("subset spec: horizon must be >= 1");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (lags[i] < 1) throw ModelError("subset spec: lags must be >= 1");
    if (i > 0 && lags[i] <= lags[i - 1])
      throw ModelError("subset spec: lags must be strictly ascending (no duplicates)");
  }
}

bool SubsetSpec::contiguous() const {
  for (std::size_t i = 0; i < lags.size(); ++i)
    if (lags[i] != static_cast<int>(i) + 1) return false;
  return true;
}

std::string SubsetSpec::label() const {
  std::ostringstream s;
  s << "{";
  for (std::size_t i = 0; i < lags.size(); ++i) s << (i ? "," : "") << lags[i];
  s << "}";
  return s.str();
}

FitResult fit(std::span<const double> x, const SubsetSpec& spec,
              std::optional<int> window_max_lag) {
  spec.validate();
  const std::size_t n = x.size();
  const int d = std::max(spec.max_lag(), window_max_lag.value_or(0));
  const int h = spec.horizon;
  const std::size_t k = spec.size();

  // 1-based rows t = d..n-h; row count n-h-d+1. At least k+2 rows.
  if (n < static_cast<std::size_t>(d + h) + k + 1) {
    std::ostringstream msg;
    msg << "fit " << spec.label() << ": sample too short (n = " << n
        << ", need >= " << d + h + static_cast<int>(k) + 1 << ")";
    throw ModelError(msg.str());
  }
  const std::size_t rows = n - static_cast<std::size_t>(h) - static_cast<std::size_t>(d) + 1;

  Matrix r(k, k);
  std::vector<double> rhs(k, 0.0);
  // 0-based row index it = d-1..n-h-1; regressor j-th component x[it - lag_j + 1].
  for (std::size_t it = static_cast<std::size_t>(d) - 1;
       it + static_cast<std::size_t>(h) < n; ++it) {
    const double target = x[it + static_cast<std::size_t>(h)];
    for (std::size_t a = 0; a < k; ++a) {
      const double xa = x[it + 1 - static_cast<std::size_t>(spec.lags[a])];
      rhs[a] += xa * target;
      for (std::size_t b = a; b < k; ++b)
        r(a, b) += xa * x[it + 1 - static_cast<std::size_t>(spec.lags[b])];
    }
  }
  const double norm = 1.0 / static_cast<double>(rows);
  for (std::size_t a = 0; a < k; ++a) {
    rhs[a] *= norm;
    for (std::size_t b = a; b < k; ++b) {
      r(a, b) *= norm;
      r(b, a) = r(a, b);
    }
  }

  FitResult out;
  out.spec = spec;
  out.rhat = r;
  out.n = n;
  out.rows = rows;
  out.window_max_lag = d;
  out.cond = condition_number(r);
  if (!(out.cond < 1e12)) {
    std::ostringstream msg;
    msg << "fit " << spec.label() << ": sample autocovariance matrix is "
        << "singular or ill-conditioned (cond = " << out.cond << ")";
    throw ModelError(msg.str());
  }

  const CholeskyFactor chol = cholesky(r);
  if (!chol.ok) {
    std::ostringstream msg;
    msg << "fit " << spec.label() << ": Cholesky factorization failed";
    throw ModelError(msg.str());
  }
  out.beta = chol.solve(rhs);

  // One step of iterative refinement keeps the normal-equation residual at
  // rounding level even for mildly conditioned problems.
  std::vector<double> resid(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    double s = rhs[a];
    for (std::size_t b = 0; b < k; ++b) s -= r(a, b) * out.beta[b];
    resid[a] = s;
  }
  const std::vector<double> corr = chol.solve(resid);
  for (std::size_t a = 0; a < k; ++a) out.beta[a] += corr[a];
  return out;
}

double predict_at(const FitResult& fit, std::span<const double> x, std::size_t t) {
  if (t + 1 < static_cast<std::size_t>(fit.spec.max_lag()) || t >= x.size())
    throw ModelError("predict: index outside the valid range");
  double s = 0.0;
  for (std::size_t a = 0; a < fit.spec.size(); ++a)
    s += fit.beta[a] * x[t + 1 - static_cast<std::size_t>(fit.spec.lags[a])];
  return s;
}

double predict(const FitResult& fit, std::span<const double> x) {
  return predict_at(fit, x, x.size() - 1);
}

std::vector<double> residuals(const FitResult& fit, std::span<const double> x,
                              int from_lag) {
  const std::size_t n = x.size();
  const int h = fit.spec.horizon;
  if (from_lag < fit.spec.max_lag())
    throw ModelError("residuals: window start below the candidate's max lag");
  if (static_cast<std::size_t>(from_lag + h) > n)
    throw ModelError("residuals: window empty");
  std::vector<double> out;
  out.reserve(n - static_cast<std::size_t>(from_lag + h) + 1);
  for (std::size_t it = static_cast<std::size_t>(from_lag) - 1;
       it + static_cast<std::size_t>(h) < n; ++it)
    out.push_back(x[it + static_cast<std::size_t>(h)] - predict_at(fit, x, it));
  return out;
}

}  // namespace hetfc
