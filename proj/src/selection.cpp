#include "hetfc/selection.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hetfc/errors.hpp"

namespace hetfc {

double mean_squared_residual(std::span<const double> x, const FitResult& fit, int dbar) {
  const std::vector<double> res = residuals(fit, x, dbar);
  if (res.empty()) throw ModelError("mean_squared_residual: empty window");
  double s = 0.0;
  for (double r : res) s += r * r;
  return s / static_cast<double>(res.size());
}

GHatResult second_order_mspe_estimate(std::span<const double> x, const FitResult& fit,
                                      int dbar) {
  const SubsetSpec& spec = fit.spec;
  const int h = spec.horizon;
  const std::size_t k = spec.size();
  const std::size_t n = x.size();
  if (static_cast<std::size_t>(dbar + h + (h - 1)) + k >= n)
    throw ModelError("second_order_mspe_estimate: sample too short");

  const std::vector<double> ehat = residuals(fit, x, dbar);  // t = dbar..n-h
  const std::size_t rows = ehat.size();

  // Rhat over the common window t = dbar..n-h.
  Matrix rhat(k, k);
  std::vector<double> xrow(k), xrow_s(k);
  auto load_row = [&](std::size_t t, std::vector<double>& dst) {
    for (std::size_t a = 0; a < k; ++a)
      dst[a] = x[t + 1 - static_cast<std::size_t>(spec.lags[a])];
  };
  const std::size_t first_row = static_cast<std::size_t>(dbar) - 1;
  for (std::size_t i = 0; i < rows; ++i) {
    load_row(first_row + i, xrow);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) rhat(a, b) += xrow[a] * xrow[b];
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      rhat(a, b) /= static_cast<double>(rows);
      rhat(b, a) = rhat(a, b);
    }
  const CholeskyFactor chol = cholesky(rhat);
  if (!chol.ok)
    throw ModelError("second_order_mspe_estimate: singular sample autocovariance " +
                     spec.label());

  double value = 0.0;
  for (int s = 0; s < h; ++s) {
    const std::size_t ss = static_cast<std::size_t>(s);
    Matrix lhat(k, k);
    for (std::size_t i = 0; i + ss < rows; ++i) {
      load_row(first_row + i, xrow);
      load_row(first_row + i + ss, xrow_s);
      const double ee = ehat[i] * ehat[i + ss];
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) lhat(a, b) += xrow[a] * xrow_s[b] * ee;
    }
    lhat *= 1.0 / static_cast<double>(rows - ss);
    value += (s == 0 ? 1.0 : 2.0) * trace_solve(chol, lhat);
  }

  // Batch-means SE of the combined summand series.
  GHatResult out;
  out.value = value;
  const std::size_t batch_len = std::max<std::size_t>(
      50, static_cast<std::size_t>(std::sqrt(static_cast<double>(rows))));
  const std::size_t usable = rows - static_cast<std::size_t>(h - 1);
  const std::size_t batches = usable / batch_len;
  if (batches >= 2) {
    double bm_sum = 0.0, bm_sum2 = 0.0;
    std::vector<double> rx(k);
    for (std::size_t b = 0; b < batches; ++b) {
      double s_batch = 0.0;
      for (std::size_t i = b * batch_len; i < (b + 1) * batch_len; ++i) {
        load_row(first_row + i, xrow);
        const std::vector<double> solved = chol.solve(xrow);
        double v = 0.0;
        for (int s = 0; s < h; ++s) {
          const std::size_t ss = static_cast<std::size_t>(s);
          load_row(first_row + i + ss, xrow_s);
          double quad = 0.0;
          for (std::size_t a = 0; a < k; ++a) quad += xrow_s[a] * solved[a];
          v += (s == 0 ? 1.0 : 2.0) * ehat[i] * ehat[i + ss] * quad;
        }
        s_batch += v;
      }
      const double bm = s_batch / static_cast<double>(batch_len);
      bm_sum += bm;
      bm_sum2 += bm * bm;
    }
    const double nb = static_cast<double>(batches);
    const double mean = bm_sum / nb;
    const double var = std::max(0.0, bm_sum2 / nb - mean * mean) * nb / (nb - 1.0);
    out.se = std::sqrt(var / nb);
  }
  return out;
}

ScoreAllResult score_all(std::span<const double> x, std::span<const SubsetSpec> candidates,
                         int horizon, double cn_exponent) {
  if (candidates.empty()) throw ModelError("score_all: no candidates");
  if (!(cn_exponent > 0.5) || !(cn_exponent < 1.0))
    throw ModelError("score_all: C_n exponent must lie in (0.5, 1)");

  ScoreAllResult out;
  int dbar = 0;
  for (const SubsetSpec& c : candidates) {
    if (c.horizon != horizon)
      throw ModelError("score_all: candidate horizon mismatch " + c.label());
    c.validate();
    dbar = std::max(dbar, c.max_lag());
  }
  out.dbar = dbar;

  const double n = static_cast<double>(x.size());
  out.cn = std::pow(n, cn_exponent);
  const double penalty_weight = out.cn / n;

  for (const SubsetSpec& c : candidates) {
    CandidateScore score;
    score.spec = c;
    try {
      const FitResult f = fit(x, c, dbar);
      score.sigma2_hat = mean_squared_residual(x, f, dbar);
      score.g_hat = second_order_mspe_estimate(x, f, dbar).value;
      score.mric = score.sigma2_hat + penalty_weight * score.g_hat;
      const double kparams = static_cast<double>(c.size());
      score.aic = std::log(score.sigma2_hat) + 2.0 * kparams / n;
      score.bic = std::log(score.sigma2_hat) + kparams * std::log(n) / n;
      score.ok = true;
    } catch (const ModelError& e) {
      score.failure = e.what();
    }
    out.scores.push_back(std::move(score));
  }

  auto argmin_of = [&](Criterion c) -> std::size_t {
    std::size_t best = out.scores.size();
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
      if (!out.scores[i].ok) continue;
      const double v = out.scores[i].value(c);
      // Strict < keeps the smallest index on exact ties.
      if (best == out.scores.size() || v < best_v) {
        best = i;
        best_v = v;
      }
    }
    if (best == out.scores.size())
      throw ModelError("score_all: every candidate failed to fit");
    return best;
  };
  out.argmin_mric = argmin_of(Criterion::Mric);
  out.argmin_aic = argmin_of(Criterion::Aic);
  out.argmin_bic = argmin_of(Criterion::Bic);
  return out;
}

OracleSets oracle_sets(std::span<const OracleEntry> entries) {
  if (entries.empty()) throw ModelError("oracle_sets: no candidates");

  OracleSets out;

  // M1: argmin of f within the equality tolerance tau = 4 * combined SE
  // (plus an epsilon floor for exact analytic ties). A difference inside
  // (tau, 2*tau] cannot be called either way; that demands more precision.
  std::size_t best_f = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].f < entries[best_f].f) best_f = i;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double combined = std::sqrt(entries[i].f_se * entries[i].f_se +
                                      entries[best_f].f_se * entries[best_f].f_se);
    const double tau =
        4.0 * combined + 1e-12 * std::max(1.0, std::abs(entries[best_f].f));
    const double diff = entries[i].f - entries[best_f].f;
    if (diff <= tau) {
      out.m1.push_back(i);
    } else if (combined > 0.0 && diff <= 2.0 * tau) {
      std::ostringstream msg;
      msg << "oracle_sets: f of candidate " << i << " is within (tau, 2*tau] of the "
          << "minimum (diff = " << diff << ", tau = " << tau
          << "); increase n_long to resolve M1";
      throw ModelError(msg.str());
    }
  }

  // M2: plain argmin of g inside M1 (exact ties kept, smallest index first).
  std::size_t best_g = out.m1[0];
  for (std::size_t i : out.m1)
    if (entries[i].g < entries[best_g].g) best_g = i;
  for (std::size_t i : out.m1)
    if (entries[i].g <= entries[best_g].g +
                            1e-12 * std::max(1.0, std::abs(entries[best_g].g)))
      out.m2.push_back(i);
  return out;
}

}  // namespace hetfc
