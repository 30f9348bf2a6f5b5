#include <algorithm>
#include <cmath>
#include <vector>

#include "hetfc/errors.hpp"
#include "hetfc/population.hpp"

namespace hetfc {

namespace {

double innovation_kurtosis(const InnovationDist& dist) {
  switch (dist.kind()) {
    case InnovationKind::StdNormal:
      return 3.0;
    case InnovationKind::NormalizedT: {
      const double nu = dist.nu();
      if (!(nu > 4.0))
        throw ModelError("analytic moments: normalized t needs nu > 4 for finite kurtosis");
      return 3.0 * (nu - 2.0) / (nu - 4.0);
    }
    case InnovationKind::SymGamma: {
      // |z0| ~ Gamma(xi,1): E|z0|^4 = xi(xi+1)(xi+2)(xi+3), variance xi(xi+1).
      const double xi = dist.xi();
      return (xi + 2.0) * (xi + 3.0) / (xi * (xi + 1.0));
    }
  }
  return 3.0;
}

// K(d) = E[eps_0^2 eps_d^2] with geometric decay toward sigma^4.
struct SquareCrossMoments {
  double sigma2 = 0.0;
  double k0 = 0.0;               // E eps^4
  std::vector<double> k;         // K(d) for d = 1..k.size()
  double tail_value = 0.0;       // sigma^4, the d -> infinity limit

  double at(std::size_t d) const {
    if (d == 0) return k0;
    if (d <= k.size()) return k[d - 1];
    return tail_value;
  }
};

SquareCrossMoments build_cross_moments(const VolatilityModel& vol,
                                       const InnovationDist& dist, std::size_t max_lag) {
  const double kappa = innovation_kurtosis(dist);
  SquareCrossMoments out;
  switch (vol.kind()) {
    case VolatilityKind::Constant: {
      const double s2 = vol.constant_sigma2();
      out.sigma2 = s2;
      out.k0 = kappa * s2 * s2;
      out.tail_value = s2 * s2;
      out.k.assign(max_lag, s2 * s2);
      return out;
    }
    case VolatilityKind::ApGarch: {
      if (vol.power() != 2.0)
        throw ModelError("analytic moments: power GARCH with mu != 2 unsupported");
      for (double l : vol.lambda())
        if (l != 0.0)
          throw ModelError("analytic moments: leverage (GJR) unsupported");
      if (vol.phi().size() != 1 || vol.psi().size() > 1)
        throw ModelError("analytic moments: only GARCH(1,1) is supported");
      const double phi1 = vol.phi()[0];
      const double psi1 = vol.psi().empty() ? 0.0 : vol.psi()[0];
      const double c = phi1 + psi1;
      if (!(c < 1.0)) throw ModelError("analytic moments: GARCH not stationary");
      const double fourth_load = c * c + (kappa - 1.0) * phi1 * phi1;
      if (!(fourth_load < 1.0))
        throw ModelError("analytic moments: GARCH fourth moment is infinite");

      const double phi0 = vol.phi0();
      const double sigma2 = phi0 / (1.0 - c);
      // E sigma^4 from squaring sigma_t^2 = phi0 + (phi1 z^2 + psi1) sigma_{t-1}^2.
      const double esigma4 =
          (phi0 * phi0 + 2.0 * phi0 * c * sigma2) / (1.0 - fourth_load);
      const double eeps4 = kappa * esigma4;
      const double var_eps2 = eeps4 - sigma2 * sigma2;
      // w_t = eps_t^2 - sigma_t^2; eps^2 follows an ARMA(1,1) in w.
      const double var_w = (kappa - 1.0) * esigma4;
      const double gamma1 = c * var_eps2 - psi1 * var_w;

      out.sigma2 = sigma2;
      out.k0 = eeps4;
      out.tail_value = sigma2 * sigma2;
      out.k.resize(max_lag);
      double decay = gamma1;
      for (std::size_t d = 1; d <= max_lag; ++d) {
        out.k[d - 1] = sigma2 * sigma2 + decay;
        decay *= c;
      }
      return out;
    }
    case VolatilityKind::Sv: {
      // log sigma^2 Gaussian: E e^{u_0 + u_d} = exp(2m + s^2 + gamma_u(d)).
      double asum = 0.0;
      for (double a : vol.sv_a()) asum += a;
      const double mean = vol.sv_a0() / (1.0 - asum);
      const LinearFilter logvol = LinearFilter::from_arma(vol.sv_a(), {}, 1e-14);
      const double s2 = logvol.autocovariance(vol.sv_v_var(), 0);
      out.sigma2 = std::exp(mean + 0.5 * s2);
      out.k0 = kappa * std::exp(2.0 * mean + 2.0 * s2);
      out.tail_value = std::exp(2.0 * mean + s2);
      out.k.resize(max_lag);
      for (std::size_t d = 1; d <= max_lag; ++d)
        out.k[d - 1] =
            std::exp(2.0 * mean + s2 + logvol.autocovariance(vol.sv_v_var(), d));
      return out;
    }
  }
  throw ModelError("analytic moments: unsupported volatility model");
}

// A finite linear combination sum_tau c[tau - start] eps_tau.
struct ErrorComb {
  int start = 0;
  std::vector<double> c;

  double at(int tau) const {
    const int i = tau - start;
    if (i < 0 || i >= static_cast<int>(c.size())) return 0.0;
    return c[static_cast<std::size_t>(i)];
  }
};

// Pointwise product of two combinations (support intersection).
ErrorComb hadamard(const ErrorComb& a, const ErrorComb& b) {
  const int lo = std::max(a.start, b.start);
  const int hi = std::min(a.start + static_cast<int>(a.c.size()),
                          b.start + static_cast<int>(b.c.size()));
  ErrorComb out;
  out.start = lo;
  if (hi > lo) {
    out.c.resize(static_cast<std::size_t>(hi - lo));
    for (int t = lo; t < hi; ++t)
      out.c[static_cast<std::size_t>(t - lo)] = a.at(t) * b.at(t);
  }
  return out;
}

double cross_sum(const ErrorComb& u, const ErrorComb& v, const SquareCrossMoments& km) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    if (u.c[i] == 0.0) continue;
    const int p = u.start + static_cast<int>(i);
    for (std::size_t j = 0; j < v.c.size(); ++j) {
      if (v.c[j] == 0.0) continue;
      const int q = v.start + static_cast<int>(j);
      s += u.c[i] * v.c[j] * km.at(static_cast<std::size_t>(std::abs(p - q)));
    }
  }
  return s;
}

// E[(sum A eps)(sum B eps)(sum C eps)(sum D eps)] for symmetric innovations:
// only pair partitions survive, every pair contributing K(|p - q|).
double fourth_moment(const ErrorComb& a, const ErrorComb& b, const ErrorComb& c,
                     const ErrorComb& d, const SquareCrossMoments& km) {
  const ErrorComb ab = hadamard(a, b), cd = hadamard(c, d);
  const ErrorComb ac = hadamard(a, c), bd = hadamard(b, d);
  const ErrorComb ad = hadamard(a, d), bc = hadamard(b, c);
  double s = cross_sum(ab, cd, km) + cross_sum(ac, bd, km) + cross_sum(ad, bc, km);
  // The all-equal partition was counted three times with weight K(0).
  const ErrorComb abcd = hadamard(ab, cd);
  double quad = 0.0;
  for (double v : abcd.c) quad += v;
  return s - 2.0 * quad * km.k0;
}

}  // namespace

double error_square_cross_moment(const VolatilityModel& vol, const InnovationDist& dist,
                                 std::size_t d) {
  return build_cross_moments(vol, dist, d == 0 ? 1 : d).at(d);
}

PopulationMoments analytic_moments(const DgpSpec& dgp, const SubsetSpec& spec) {
  spec.validate();

  PopulationMoments m;
  m.spec = spec;
  m.n_long = 0;
  m.seed = 0;

  const std::vector<double>& alpha = dgp.filter.coeffs();
  const int filter_lag = static_cast<int>(dgp.filter.truncation_length());
  const int h = spec.horizon;
  const int d_max = spec.max_lag();
  const std::size_t k = spec.size();

  const SquareCrossMoments km = build_cross_moments(
      dgp.volatility, dgp.innovations,
      static_cast<std::size_t>(2 * (filter_lag + h + d_max) + 4));
  m.sigma2_err = km.sigma2;

  const AutocovFn gamma = [&](std::size_t j) {
    return dgp.filter.autocovariance(m.sigma2_err, j);
  };
  m.beta = projection(gamma, spec);
  m.f_h = model_error_variance(gamma, spec);

  // x_{t0} = sum_i alpha_i eps_{t0 - i}.
  auto x_comb = [&](int t0) {
    ErrorComb e;
    e.start = t0 - filter_lag;
    e.c.resize(static_cast<std::size_t>(filter_lag) + 1);
    for (int i = 0; i <= filter_lag; ++i)
      e.c[static_cast<std::size_t>(filter_lag - i)] = alpha[static_cast<std::size_t>(i)];
    return e;
  };
  // eps_{t0,h,J} = x_{t0+h} - sum_m beta_m x_{t0+1-J_m}.
  auto model_error_comb = [&](int t0) {
    ErrorComb e = x_comb(t0 + h);
    for (std::size_t a = 0; a < k; ++a) {
      const ErrorComb xa = x_comb(t0 + 1 - spec.lags[a]);
      const int lo = std::min(e.start, xa.start);
      const int hi = std::max(e.start + static_cast<int>(e.c.size()),
                              xa.start + static_cast<int>(xa.c.size()));
      ErrorComb merged;
      merged.start = lo;
      merged.c.assign(static_cast<std::size_t>(hi - lo), 0.0);
      for (int t = lo; t < hi; ++t)
        merged.c[static_cast<std::size_t>(t - lo)] = e.at(t) - m.beta[a] * xa.at(t);
      e = std::move(merged);
    }
    return e;
  };
  // etilde_{t0,h} = sum_{j=0}^{h-1} alpha_j eps_{t0+h-j}.
  auto etilde_comb = [&](int t0) {
    ErrorComb e;
    e.start = t0 + 1;
    e.c.resize(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j)
      e.c[static_cast<std::size_t>(h - 1 - j)] = alpha[static_cast<std::size_t>(j)];
    return e;
  };

  const std::size_t hs = static_cast<std::size_t>(h);
  m.R = Matrix(k, k);
  m.R_se = Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      m.R(a, b) = gamma(static_cast<std::size_t>(std::abs(spec.lags[a] - spec.lags[b])));

  m.L.assign(hs, Matrix(k, k));
  m.L_se.assign(hs, Matrix(k, k));
  m.Lstar.assign(hs, Matrix(k, k));
  m.Lstar_se.assign(hs, Matrix(k, k));
  m.Ltilde.assign(hs, Matrix(k, k));
  m.cross.assign(hs, Matrix(k, k));
  m.etilde_prod.assign(hs, 0.0);
  m.etilde_prod_analytic.assign(hs, 0.0);
  m.g_tilde_se = 0.0;

  const ErrorComb err0 = model_error_comb(0);
  const ErrorComb til0 = etilde_comb(0);
  for (std::size_t s = 0; s < hs; ++s) {
    const ErrorComb err_s = model_error_comb(static_cast<int>(s));
    const ErrorComb til_s = etilde_comb(static_cast<int>(s));

    double e_s = 0.0;
    for (int j = 0; j + static_cast<int>(s) < h; ++j)
      e_s += alpha[static_cast<std::size_t>(j)] *
             alpha[static_cast<std::size_t>(j) + s];
    e_s *= m.sigma2_err;
    m.etilde_prod[s] = e_s;
    m.etilde_prod_analytic[s] = e_s;

    for (std::size_t a = 0; a < k; ++a) {
      const ErrorComb xa = x_comb(1 - spec.lags[a]);
      for (std::size_t b = 0; b < k; ++b) {
        const ErrorComb xb = x_comb(static_cast<int>(s) + 1 - spec.lags[b]);
        m.cross[s](a, b) =
            gamma(static_cast<std::size_t>(std::abs(static_cast<int>(s) + spec.lags[a] -
                                                    spec.lags[b])));
        m.L[s](a, b) = fourth_moment(xa, xb, err0, err_s, km);
        m.Lstar[s](a, b) =
            fourth_moment(xa, xb, til0, til_s, km) - m.cross[s](a, b) * e_s;
        m.Ltilde[s](a, b) =
            m.L[s](a, b) - m.Lstar[s](a, b) - m.cross[s](a, b) * e_s;
      }
    }
  }
  return m;
}

}  // namespace hetfc
