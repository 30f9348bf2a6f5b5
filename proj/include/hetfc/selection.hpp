#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hetfc/predictor.hpp"

namespace hetfc {

// Mean squared residual over the common window t = dbar..n-h (1-based):
// the natural estimate of f_h(J).
double mean_squared_residual(std::span<const double> x, const FitResult& fit, int dbar);

struct GHatResult {
  double value = 0.0;
  double se = 0.0;  // batch-means SE over the summand series
};

// Moment estimate of the second-order MSPE:
//   tr{Rhat^{-1} Lhat_0} + 2 sum_{s=1}^{h-1} tr{Rhat^{-1} Lhat_s}
// with Lhat_s = (n-h-dbar-s+1)^{-1} sum_t x_t(J) x_{t+s}(J)^T ehat_t ehat_{t+s}
// over t = dbar..n-h-s, and Rhat over the same common window.
GHatResult second_order_mspe_estimate(std::span<const double> x, const FitResult& fit,
                                      int dbar);

enum class Criterion { Mric, Aic, Bic };

struct CandidateScore {
  SubsetSpec spec;
  bool ok = false;
  std::string failure;  // why the candidate was excluded
  double sigma2_hat = 0.0;
  double g_hat = 0.0;
  double mric = 0.0;
  double aic = 0.0;
  double bic = 0.0;

  double value(Criterion c) const {
    switch (c) {
      case Criterion::Mric: return mric;
      case Criterion::Aic: return aic;
      case Criterion::Bic: return bic;
    }
    return 0.0;
  }
};

struct ScoreAllResult {
  std::vector<CandidateScore> scores;
  std::size_t argmin_mric = 0;
  std::size_t argmin_aic = 0;
  std::size_t argmin_bic = 0;
  int dbar = 0;
  double cn = 0.0;

  std::size_t argmin(Criterion c) const {
    switch (c) {
      case Criterion::Mric: return argmin_mric;
      case Criterion::Aic: return argmin_aic;
      case Criterion::Bic: return argmin_bic;
    }
    return 0;
  }
};

// Scores every candidate on the common window (dbar = max lag over all
// candidates) and returns per-candidate MRIC / AIC / BIC values plus the
// argmins (ties broken by the smallest candidate index). MRIC uses
// C_n = n^{cn_exponent}; the exponent must lie in (0.5, 1). Candidates whose
// fit fails are excluded with the reason recorded; all failing is an error.
ScoreAllResult score_all(std::span<const double> x, std::span<const SubsetSpec> candidates,
                         int horizon, double cn_exponent = 0.6);

// Population oracle inputs for one candidate.
struct OracleEntry {
  double f = 0.0;
  double f_se = 0.0;
  double g = 0.0;
  double g_se = 0.0;
};

struct OracleSets {
  std::vector<std::size_t> m1;  // best goodness-of-fit (within tie tolerance)
  std::vector<std::size_t> m2;  // best second-order MSPE inside m1
};

// M1 = argmin f within tau = 4 * combined SE (exact ties when SEs are zero);
// M2 = argmin g inside M1 with the same rule. Differences falling between
// tau and 2*tau are declared ambiguous (larger n_long needed).
OracleSets oracle_sets(std::span<const OracleEntry> entries);

}  // namespace hetfc
