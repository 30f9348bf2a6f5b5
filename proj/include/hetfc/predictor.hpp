#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetfc/linalg.hpp"

namespace hetfc {

// A candidate subset AR model: regress x_{t+h} on (x_{t+1-j}, j in J).
struct SubsetSpec {
  std::vector<int> lags;  // sorted ascending, distinct, all >= 1
  int horizon = 1;

  static SubsetSpec ar(int k, int h);  // lags {1, ..., k}
  void validate() const;               // throws ModelError on a malformed spec
  int max_lag() const { return lags.empty() ? 0 : lags.back(); }
  std::size_t size() const { return lags.size(); }
  bool contiguous() const;  // lags == {1, ..., k}
  std::string label() const;
};

struct FitResult {
  SubsetSpec spec;
  std::vector<double> beta;
  Matrix rhat;            // sample autocovariance matrix over the fit window
  std::size_t n = 0;      // observations supplied
  std::size_t rows = 0;   // regression rows used
  int window_max_lag = 0; // d used for the window start (>= spec.max_lag())
  double cond = 0.0;      // condition number of rhat
};

// Direct h-step least squares over rows t = d..n-h (1-based), where d is
// spec.max_lag() or, when window_max_lag is given, that larger value so
// competing candidates can be scored on identical rows. Throws ModelError on
// short samples or when cond(rhat) > 1e12.
FitResult fit(std::span<const double> x, const SubsetSpec& spec,
              std::optional<int> window_max_lag = std::nullopt);

// beta^T x_t(J) with t a 0-based index into x; predicts x[t + h].
double predict_at(const FitResult& fit, std::span<const double> x, std::size_t t);
// Prediction of the next unobserved value x_{n+h} from the last row.
double predict(const FitResult& fit, std::span<const double> x);

// Residuals x_{t+h} - beta^T x_t(J) for t = from_lag..n-h (1-based), i.e.
// one value per regression row of the window starting at from_lag (pass
// fit.window_max_lag to reproduce the fitting window).
std::vector<double> residuals(const FitResult& fit, std::span<const double> x,
                              int from_lag);

}  // namespace hetfc
