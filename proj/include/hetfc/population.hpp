#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hetfc/dgp.hpp"
#include "hetfc/linalg.hpp"
#include "hetfc/predictor.hpp"

namespace hetfc {

using AutocovFn = std::function<double(std::size_t)>;

// Population projection coefficients: R(J) beta = (gamma(h+j-1), j in J).
std::vector<double> projection(const AutocovFn& gamma, const SubsetSpec& spec);

// Model-error variance f_h(J) = E eps_{t,h,J}^2 = gamma(0) - beta^T r.
double model_error_variance(const AutocovFn& gamma, const SubsetSpec& spec);

// Population moments of a candidate under a DGP, estimated by ergodic time
// averages over one long realization. The projection coefficients and f_h
// come from the exact autocovariances; the fourth-order moment matrices have
// no closed form under conditional heteroscedasticity and are averaged, with
// batch-means standard errors.
//
// For s = 0..h-1 and a common window per s:
//   cross[s]  ~ E[x_t(J) x_{t+s}(J)^T]
//   L[s]      ~ E[x_t(J) x_{t+s}(J)^T eps_{t,h,J} eps_{t+s,h,J}]
//   Lstar[s]  = avg(x x^T etilde_t etilde_{t+s}) - cross[s] * etilde_prod[s]
//   Ltilde[s] = L[s] - Lstar[s] - cross[s] * etilde_prod[s]
// where eps_{t,h,J} uses the analytic projection and
// etilde_{t,h} = sum_{j<h} alpha_j eps_{t+h-j} uses the realized errors.
struct PopulationMoments {
  SubsetSpec spec;
  std::size_t n_long = 0;
  std::uint64_t seed = 0;
  double sigma2_err = 0.0;  // E eps_t^2

  std::vector<double> beta;  // analytic projection
  double f_h = 0.0;          // analytic

  Matrix R;     // time-average estimate of E[x_t(J) x_t(J)^T]
  Matrix R_se;  // per-entry batch-means SE
  std::vector<Matrix> L, L_se;
  std::vector<Matrix> Lstar, Lstar_se;
  std::vector<Matrix> Ltilde;
  std::vector<Matrix> cross;
  std::vector<double> etilde_prod;           // empirical E[etilde_t etilde_{t+s}]
  std::vector<double> etilde_prod_analytic;  // sigma2 * sum alpha_j alpha_{j+s}, j+s <= h-1

  double g_tilde_se = 0.0;  // batch-means SE of the second-order MSPE
};

PopulationMoments estimate_moments(const DgpSpec& dgp, const SubsetSpec& spec,
                                   std::size_t n_long, std::uint64_t seed);

// Exact population moments for error models whose fourth-order structure is
// available in closed form: plain GARCH(1,1) (lambda = 0), SV, and constant
// volatility, all with symmetric innovations of finite kurtosis. Every
// moment matrix is assembled from E[eps_p eps_q eps_r eps_s], which reduces
// to the lag function K(d) = E[eps_0^2 eps_d^2] because odd products vanish.
// Throws ModelError for unsupported models (power GARCH with mu != 2 or
// leverage, GARCH(p,q) beyond (1,1), infinite fourth moment).
//
// This is the route the Monte Carlo estimator cannot replace when the
// summands are so heavy-tailed that the ergodic average converges too slowly
// to matter (barely-finite fourth moments).
PopulationMoments analytic_moments(const DgpSpec& dgp, const SubsetSpec& spec);

// E[eps_0^2 eps_d^2] for the supported error models (d = 0 gives E eps^4).
double error_square_cross_moment(const VolatilityModel& vol, const InnovationDist& dist,
                                 std::size_t d);

// tr{R^{-1} L_0} + 2 sum_{s=1}^{h-1} tr{R^{-1} L_s}.
double second_order_mspe(const PopulationMoments& m);

// Complexity / heteroscedasticity / misspecification split of the
// second-order MSPE. Defined for full-order AR(k) working models; the three
// terms sum to second_order_mspe() exactly because every expectation is the
// same time average.
struct MspeDecomposition {
  double complexity = 0.0;
  double heteroscedasticity = 0.0;
  double misspecification = 0.0;

  double total() const { return complexity + heteroscedasticity + misspecification; }
};

MspeDecomposition decompose(const PopulationMoments& m);

}  // namespace hetfc
