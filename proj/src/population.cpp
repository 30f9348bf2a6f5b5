#include "hetfc/population.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetfc/errors.hpp"

namespace hetfc {

std::vector<double> projection(const AutocovFn& gamma, const SubsetSpec& spec) {
  spec.validate();
  const std::size_t k = spec.size();
  Matrix r(k, k);
  std::vector<double> rhs(k);
  for (std::size_t a = 0; a < k; ++a) {
    rhs[a] = gamma(static_cast<std::size_t>(spec.horizon + spec.lags[a] - 1));
    for (std::size_t b = 0; b < k; ++b)
      r(a, b) = gamma(static_cast<std::size_t>(std::abs(spec.lags[a] - spec.lags[b])));
  }
  const CholeskyFactor chol = cholesky(r);
  if (!chol.ok)
    throw ModelError("projection: autocovariance matrix R(J) is singular");
  return chol.solve(rhs);
}

double model_error_variance(const AutocovFn& gamma, const SubsetSpec& spec) {
  const std::vector<double> beta = projection(gamma, spec);
  double s = gamma(0);
  for (std::size_t a = 0; a < spec.size(); ++a)
    s -= beta[a] * gamma(static_cast<std::size_t>(spec.horizon + spec.lags[a] - 1));
  return s;
}

namespace {

// Time averages with batch-means standard errors (serial correlation makes
// naive i.i.d. SEs useless here).
struct BatchAccumulator {
  std::size_t batch_len;
  std::size_t in_batch = 0;
  std::size_t count = 0;
  std::size_t batches = 0;
  std::vector<double> batch_sum;
  std::vector<double> total;
  std::vector<double> bm_sum;
  std::vector<double> bm_sum2;

  BatchAccumulator(std::size_t entries, std::size_t blen)
      : batch_len(blen),
        batch_sum(entries, 0.0),
        total(entries, 0.0),
        bm_sum(entries, 0.0),
        bm_sum2(entries, 0.0) {}

  void add(std::size_t e, double v) {
    total[e] += v;
    batch_sum[e] += v;
  }

  void flush() {
    if (in_batch == 0) return;
    for (std::size_t e = 0; e < batch_sum.size(); ++e) {
      const double bm = batch_sum[e] / static_cast<double>(in_batch);
      bm_sum[e] += bm;
      bm_sum2[e] += bm * bm;
      batch_sum[e] = 0.0;
    }
    ++batches;
    in_batch = 0;
  }

  void step_done() {
    ++count;
    if (++in_batch == batch_len) flush();
  }

  double mean(std::size_t e) const { return total[e] / static_cast<double>(count); }

  double se(std::size_t e) const {
    if (batches < 2) return 0.0;
    const double b = static_cast<double>(batches);
    const double m = bm_sum[e] / b;
    const double var = std::max(0.0, bm_sum2[e] / b - m * m) * b / (b - 1.0);
    return std::sqrt(var / b);
  }
};

Matrix invert_spd(const Matrix& a) {
  const std::size_t k = a.rows();
  const CholeskyFactor chol = cholesky(a);
  if (!chol.ok) throw ModelError("invert_spd: matrix not positive definite");
  Matrix inv(k, k);
  std::vector<double> e(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = chol.solve(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < k; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace

PopulationMoments estimate_moments(const DgpSpec& dgp, const SubsetSpec& spec,
                                   std::size_t n_long, std::uint64_t seed) {
  spec.validate();
  if (n_long < 100'000)
    throw ModelError("estimate_moments: n_long must be at least 1e5");

  PopulationMoments m;
  m.spec = spec;
  m.n_long = n_long;
  m.seed = seed;

  const VarianceEstimate sig = dgp.volatility.unconditional_variance(dgp.innovations);
  m.sigma2_err = sig.value;
  const AutocovFn gamma = [&](std::size_t j) {
    return dgp.filter.autocovariance(m.sigma2_err, j);
  };
  m.beta = projection(gamma, spec);
  m.f_h = model_error_variance(gamma, spec);

  const std::size_t k = spec.size();
  const int h = spec.horizon;
  const int d = spec.max_lag();
  const std::vector<double>& alpha = dgp.filter.coeffs();

  // Rows t = d..d+n_long-1 (1-based); every row also needs x and eps up to
  // t + s + h with s <= h-1.
  const std::size_t path_len = n_long + static_cast<std::size_t>(d + 2 * h);
  RngStream stream(seed);
  const PathBundle path = simulate_path(dgp, path_len, stream);

  const std::size_t first_row = static_cast<std::size_t>(d) - 1;
  const std::size_t row_span = n_long + static_cast<std::size_t>(h);

  // Precompute model errors (analytic projection) and the truncated-error
  // aggregates over all rows touched by any offset s.
  std::vector<double> epsp(row_span), epst(row_span);
  for (std::size_t i = 0; i < row_span; ++i) {
    const std::size_t t = first_row + i;
    double v = path.x[t + static_cast<std::size_t>(h)];
    for (std::size_t a = 0; a < k; ++a)
      v -= m.beta[a] * path.x[t + 1 - static_cast<std::size_t>(spec.lags[a])];
    epsp[i] = v;
    double w = 0.0;
    for (int j = 0; j < h; ++j)
      w += alpha[static_cast<std::size_t>(j)] * path.eps[t + static_cast<std::size_t>(h - j)];
    epst[i] = w;
  }

  std::vector<double> xrow(k), xrow_s(k);
  auto load_row = [&](std::size_t t, std::vector<double>& dst) {
    for (std::size_t a = 0; a < k; ++a)
      dst[a] = path.x[t + 1 - static_cast<std::size_t>(spec.lags[a])];
  };

  const std::size_t batch_len = std::max<std::size_t>(
      200, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_long))));
  const std::size_t km = k * k;

  BatchAccumulator racc(km, batch_len);
  for (std::size_t i = 0; i < n_long; ++i) {
    load_row(first_row + i, xrow);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) racc.add(a * k + b, xrow[a] * xrow[b]);
    racc.step_done();
  }
  racc.flush();

  m.R = Matrix(k, k);
  m.R_se = Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      m.R(a, b) = racc.mean(a * k + b);
      m.R_se(a, b) = racc.se(a * k + b);
    }
  const Matrix rinv = invert_spd(m.R);

  const std::size_t hs = static_cast<std::size_t>(h);
  // Per s entries: [0..km) L, [km..2km) x x^T etilde etilde, [2km..3km) cross,
  // [3km] etilde product.
  std::vector<BatchAccumulator> acc;
  acc.reserve(hs);
  for (std::size_t s = 0; s < hs; ++s) acc.emplace_back(3 * km + 1, batch_len);

  for (std::size_t s = 0; s < hs; ++s) {
    BatchAccumulator& a_s = acc[s];
    for (std::size_t i = 0; i < n_long; ++i) {
      const std::size_t t = first_row + i;
      load_row(t, xrow);
      load_row(t + s, xrow_s);
      const double ee = epsp[i] * epsp[i + s];
      const double tt = epst[i] * epst[i + s];

      for (std::size_t a = 0; a < k; ++a) {
        const double xa = xrow[a];
        for (std::size_t b = 0; b < k; ++b) {
          const double prod = xa * xrow_s[b];
          a_s.add(a * k + b, prod * ee);
          a_s.add(km + a * k + b, prod * tt);
          a_s.add(2 * km + a * k + b, prod);
        }
      }
      a_s.add(3 * km, tt);
      a_s.step_done();
    }
    a_s.flush();
  }

  // Batch-means SE of the full second-order MSPE from the combined per-step
  // scalar sum_s w_s eps_t eps_{t+s} x_{t+s}^T R^{-1} x_t (the per-s pieces
  // are correlated, so they cannot be combined from separate SEs).
  BatchAccumulator gacc(1, batch_len);
  for (std::size_t i = 0; i < n_long; ++i) {
    const std::size_t t = first_row + i;
    load_row(t, xrow);
    double v = 0.0;
    for (std::size_t s = 0; s < hs; ++s) {
      load_row(t + s, xrow_s);
      double quad = 0.0;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) quad += xrow_s[b] * rinv(b, a) * xrow[a];
      v += (s == 0 ? 1.0 : 2.0) * epsp[i] * epsp[i + s] * quad;
    }
    gacc.add(0, v);
    gacc.step_done();
  }
  gacc.flush();

  m.L.assign(hs, Matrix(k, k));
  m.L_se.assign(hs, Matrix(k, k));
  m.Lstar.assign(hs, Matrix(k, k));
  m.Lstar_se.assign(hs, Matrix(k, k));
  m.Ltilde.assign(hs, Matrix(k, k));
  m.cross.assign(hs, Matrix(k, k));
  m.etilde_prod.assign(hs, 0.0);
  m.etilde_prod_analytic.assign(hs, 0.0);

  for (std::size_t s = 0; s < hs; ++s) {
    const BatchAccumulator& a_s = acc[s];
    m.etilde_prod[s] = a_s.mean(3 * km);
    double analytic = 0.0;
    for (int j = 0; j + static_cast<int>(s) < h; ++j)
      analytic += alpha[static_cast<std::size_t>(j)] * alpha[static_cast<std::size_t>(j) + s];
    m.etilde_prod_analytic[s] = m.sigma2_err * analytic;

    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const std::size_t e = a * k + b;
        m.L[s](a, b) = a_s.mean(e);
        m.L_se[s](a, b) = a_s.se(e);
        m.cross[s](a, b) = a_s.mean(2 * km + e);
        m.Lstar[s](a, b) = a_s.mean(km + e) - m.cross[s](a, b) * m.etilde_prod[s];
        // The subtraction of two long-run means adds negligible variance
        // next to the raw product term.
        m.Lstar_se[s](a, b) = a_s.se(km + e);
        m.Ltilde[s](a, b) =
            m.L[s](a, b) - m.Lstar[s](a, b) - m.cross[s](a, b) * m.etilde_prod[s];
      }
  }
  m.g_tilde_se = gacc.se(0);
  return m;
}

double second_order_mspe(const PopulationMoments& m) {
  const CholeskyFactor chol = cholesky(m.R);
  if (!chol.ok) throw ModelError("second_order_mspe: R(J) not positive definite");
  double g = trace_solve(chol, m.L[0]);
  for (std::size_t s = 1; s < m.L.size(); ++s) g += 2.0 * trace_solve(chol, m.L[s]);
  return g;
}

MspeDecomposition decompose(const PopulationMoments& m) {
  if (!m.spec.contiguous())
    throw ModelError("decompose: defined for full-order AR(k) working models only");
  const CholeskyFactor chol = cholesky(m.R);
  if (!chol.ok) throw ModelError("decompose: R(k) not positive definite");

  MspeDecomposition out;
  for (std::size_t s = 0; s < m.L.size(); ++s) {
    const double w = s == 0 ? 1.0 : 2.0;
    out.complexity += w * trace_solve(chol, m.cross[s]) * m.etilde_prod[s];
    out.heteroscedasticity += w * trace_solve(chol, m.Lstar[s]);
    out.misspecification += w * trace_solve(chol, m.Ltilde[s]);
  }
  return out;
}

}  // namespace hetfc
