#include "hetfc/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hetfc/errors.hpp"
#include "hetfc/linalg.hpp"
#include "hetfc/linear_process.hpp"

namespace hetfc {

namespace {
constexpr double kSigma2Cap = 1e12;
}

VolatilityModel VolatilityModel::garch(double phi0, std::vector<double> phi,
                                       std::vector<double> psi) {
  return ap_garch(phi0, std::move(phi), std::vector<double>(), std::move(psi), 2.0);
}

VolatilityModel VolatilityModel::gjr_garch(double phi0, std::vector<double> phi,
                                           std::vector<double> lambda,
                                           std::vector<double> psi) {
  return ap_garch(phi0, std::move(phi), std::move(lambda), std::move(psi), 2.0);
}

VolatilityModel VolatilityModel::ap_garch(double phi0, std::vector<double> phi,
                                          std::vector<double> lambda,
                                          std::vector<double> psi, double mu) {
  VolatilityModel m;
  m.kind_ = VolatilityKind::ApGarch;
  m.phi0_ = phi0;
  m.phi_ = std::move(phi);
  m.lambda_ = std::move(lambda);
  m.psi_ = std::move(psi);
  m.mu_ = mu;
  if (m.lambda_.empty()) m.lambda_.assign(m.phi_.size(), 0.0);
  m.validate_apgarch();
  return m;
}

void VolatilityModel::validate_apgarch() const {
  if (!(phi0_ > 0.0)) throw std::invalid_argument("power GARCH: phi0 must be > 0");
  if (!(mu_ > 0.0)) throw std::invalid_argument("power GARCH: mu must be > 0");
  if (lambda_.size() != phi_.size())
    throw std::invalid_argument("power GARCH: lambda and phi must have equal length");
  for (double p : phi_)
    if (p < 0.0) throw std::invalid_argument("power GARCH: phi_i must be >= 0");
  for (double l : lambda_)
    if (!(std::abs(l) < 1.0))
      throw std::invalid_argument("power GARCH: |lambda_i| must be < 1");
  for (double p : psi_)
    if (p < 0.0) throw std::invalid_argument("power GARCH: psi_j must be >= 0");
}

VolatilityModel VolatilityModel::sv(double a0, std::vector<double> a, double v_var) {
  if (!(v_var > 0.0)) throw std::invalid_argument("SV: v_var must be > 0");
  VolatilityModel m;
  m.kind_ = VolatilityKind::Sv;
  m.sv_a0_ = a0;
  m.sv_a_ = std::move(a);
  m.sv_v_var_ = v_var;
  return m;
}

VolatilityModel VolatilityModel::constant(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("constant volatility: sigma2 must be > 0");
  VolatilityModel m;
  m.kind_ = VolatilityKind::Constant;
  m.const_sigma2_ = sigma2;
  return m;
}

VarianceEstimate VolatilityModel::abs_power_moment(const InnovationDist& dist,
                                                   double lambda, double mu,
                                                   std::size_t n_mc) {
  if (mu == 2.0 && dist.symmetric()) {
    // E(|z| - lambda z)^2 = (1 + lambda^2) E z^2 - 2 lambda E|z|z = 1 + lambda^2.
    return {1.0 + lambda * lambda, 0.0, true};
  }
  RngStream stream(0x9a75c0ffee0001ULL);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    const double z = dist.sample(stream);
    const double v = std::pow(std::abs(z) - lambda * z, mu);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / static_cast<double>(n_mc);
  const double var = std::max(0.0, sum2 / static_cast<double>(n_mc) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n_mc)), false};
}

StationarityReport VolatilityModel::check_stationarity(const InnovationDist& dist) const {
  StationarityReport r;
  switch (kind_) {
    case VolatilityKind::Constant:
      r.ok = true;
      r.margin = 1.0;
      return r;
    case VolatilityKind::ApGarch: {
      double load = 0.0;
      double se2 = 0.0;
      for (std::size_t i = 0; i < phi_.size(); ++i) {
        const VarianceEstimate e = abs_power_moment(dist, lambda_[i], mu_);
        load += phi_[i] * e.value;
        se2 += phi_[i] * phi_[i] * e.se * e.se;
      }
      for (double p : psi_) load += p;
      r.margin = 1.0 - load;
      r.margin_se = std::sqrt(se2);
      r.ok = r.margin > 0.0;
      return r;
    }
    case VolatilityKind::Sv: {
      std::vector<double> poly(sv_a_.size() + 1, 0.0);
      poly[0] = 1.0;
      for (std::size_t i = 0; i < sv_a_.size(); ++i) poly[i + 1] = -sv_a_[i];
      const double m = min_root_modulus(poly);
      r.margin = std::isinf(m) ? 1.0 : m - 1.0;
      r.ok = r.margin > 0.0;
      return r;
    }
  }
  return r;
}

VarianceEstimate VolatilityModel::unconditional_variance(const InnovationDist& dist) const {
  const StationarityReport st = check_stationarity(dist);
  if (!st.ok) throw ModelError("unconditional variance: model is not stationary");

  switch (kind_) {
    case VolatilityKind::Constant:
      return {const_sigma2_, 0.0, true};
    case VolatilityKind::Sv: {
      // log sigma^2 is stationary Gaussian: E sigma^2 = exp(m + s^2/2).
      double asum = 0.0;
      for (double a : sv_a_) asum += a;
      const double mean = sv_a0_ / (1.0 - asum);
      const LinearFilter logvol = LinearFilter::from_arma(sv_a_, {}, 1e-14);
      const double s2 = logvol.autocovariance(sv_v_var_, 0);
      return {std::exp(mean + 0.5 * s2), 0.0, true};
    }
    case VolatilityKind::ApGarch: {
      if (mu_ == 2.0) {
        double load = 0.0;
        for (std::size_t i = 0; i < phi_.size(); ++i)
          load += phi_[i] * (1.0 + lambda_[i] * lambda_[i]);
        for (double p : psi_) load += p;
        return {phi0_ / (1.0 - load), 0.0, true};
      }
      // mu != 2: E sigma^2 has no closed form; long-run average of eps^2.
      constexpr std::size_t kBurn = 10'000;
      constexpr std::size_t kLen = 2'000'000;
      RngStream stream(0x9a75c0ffee0002ULL);
      const ErrorPath path = simulate_errors(dist, kLen, kBurn, stream);
      constexpr std::size_t kBatches = 1000;
      const std::size_t blen = kLen / kBatches;
      double mean = 0.0;
      std::vector<double> batch(kBatches, 0.0);
      for (std::size_t b = 0; b < kBatches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * blen; i < (b + 1) * blen; ++i)
          s += path.eps[i] * path.eps[i];
        batch[b] = s / static_cast<double>(blen);
        mean += batch[b];
      }
      mean /= static_cast<double>(kBatches);
      double var = 0.0;
      for (double bm : batch) var += (bm - mean) * (bm - mean);
      var /= static_cast<double>(kBatches - 1);
      return {mean, std::sqrt(var / static_cast<double>(kBatches)), false};
    }
  }
  return {};
}

ErrorPath VolatilityModel::simulate_errors(const InnovationDist& dist, std::size_t n,
                                           std::size_t burn_in, RngStream& stream) const {
  const StationarityReport st = check_stationarity(dist);
  if (!st.ok) throw ModelError("simulate_errors: model is not stationary");

  const std::size_t total = n + burn_in;
  ErrorPath out;
  out.eps.resize(n);
  out.sigma2.resize(n);
  out.z.resize(n);

  auto emit = [&](std::size_t t, double sigma2, double z) {
    if (t >= burn_in) {
      const std::size_t i = t - burn_in;
      out.sigma2[i] = sigma2;
      out.z[i] = z;
      out.eps[i] = std::sqrt(sigma2) * z;
      return out.eps[i];
    }
    return std::sqrt(sigma2) * z;
  };

  switch (kind_) {
    case VolatilityKind::Constant: {
      for (std::size_t t = 0; t < total; ++t) emit(t, const_sigma2_, dist.sample(stream));
      return out;
    }
    case VolatilityKind::ApGarch: {
      const std::size_t p = phi_.size();
      const std::size_t q = psi_.size();
      std::vector<double> moment(p);
      double load = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        moment[i] = abs_power_moment(dist, lambda_[i], mu_).value;
        load += phi_[i] * moment[i];
      }
      for (double v : psi_) load += v;
      const double stat_mean = phi0_ / (1.0 - load);  // stationary E sigma^mu

      // Ring buffers of past sigma^mu and past eps; pre-sample entries are
      // flagged so the recursion uses stationary expectations there.
      std::vector<double> sig_mu_hist(std::max<std::size_t>(q, 1), stat_mean);
      std::vector<double> eps_hist(std::max<std::size_t>(p, 1), 0.0);
      std::vector<bool> eps_valid(std::max<std::size_t>(p, 1), false);
      const bool plain_square = (mu_ == 2.0);

      for (std::size_t t = 0; t < total; ++t) {
        double smu = phi0_;
        for (std::size_t i = 0; i < p; ++i) {
          const std::size_t slot = (t + eps_hist.size() - 1 - i) % eps_hist.size();
          if (t >= i + 1 && eps_valid[slot]) {
            const double e = eps_hist[slot];
            const double base = std::abs(e) - lambda_[i] * e;
            smu += phi_[i] * (plain_square ? base * base : std::pow(base, mu_));
          } else {
            smu += phi_[i] * stat_mean * moment[i];
          }
        }
        for (std::size_t j = 0; j < q; ++j)
          smu += psi_[j] * sig_mu_hist[(t + sig_mu_hist.size() - 1 - j) % sig_mu_hist.size()];

        const double sigma2 = plain_square ? smu : std::pow(smu, 2.0 / mu_);
        if (!(sigma2 < kSigma2Cap)) {
          std::ostringstream msg;
          msg << "simulate_errors: sigma_t^2 = " << sigma2 << " exceeded " << kSigma2Cap
              << " at step " << t << " (near-explosive configuration)";
          throw ModelError(msg.str());
        }
        const double z = dist.sample(stream);
        const double eps = emit(t, sigma2, z);
        sig_mu_hist[t % sig_mu_hist.size()] = smu;
        eps_hist[t % eps_hist.size()] = eps;
        eps_valid[t % eps_hist.size()] = true;
      }
      return out;
    }
    case VolatilityKind::Sv: {
      const std::size_t p = sv_a_.size();
      double asum = 0.0;
      for (double a : sv_a_) asum += a;
      const double mean = sv_a0_ / (1.0 - asum);
      const double sd_v = std::sqrt(sv_v_var_);

      // Exact stationary start: draw (u_{-1},...,u_{-p}) from the stationary
      // Gaussian law of the AR(p) log-volatility.
      std::vector<double> hist(std::max<std::size_t>(p, 1), mean);
      if (p > 0) {
        const LinearFilter logvol = LinearFilter::from_arma(sv_a_, {}, 1e-14);
        Matrix cov(p, p);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < p; ++j)
            cov(i, j) = logvol.autocovariance(sv_v_var_, i > j ? i - j : j - i);
        const CholeskyFactor chol = cholesky(cov);
        if (!chol.ok) throw ModelError("SV: stationary covariance not positive definite");
        std::vector<double> g(p);
        for (double& v : g) v = stream.normal();
        for (std::size_t i = 0; i < p; ++i) {
          double s = mean;
          for (std::size_t j = 0; j <= i; ++j) s += chol.lower(i, j) * g[j];
          hist[i] = s;
        }
      }

      for (std::size_t t = 0; t < total; ++t) {
        double u = sv_a0_ + sd_v * stream.normal();
        for (std::size_t i = 0; i < p; ++i)
          u += sv_a_[i] * hist[(t + hist.size() - 1 - i) % hist.size()];
        const double sigma2 = std::exp(u);
        if (!(sigma2 < kSigma2Cap)) {
          std::ostringstream msg;
          msg << "simulate_errors: sigma_t^2 overflow at step " << t;
          throw ModelError(msg.str());
        }
        emit(t, sigma2, dist.sample(stream));
        hist[t % hist.size()] = u;
      }
      return out;
    }
  }
  return out;
}

}  // namespace hetfc
