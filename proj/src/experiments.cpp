#include "hetfc/experiments.hpp"

#include <cmath>

#include "hetfc/errors.hpp"
#include "hetfc/parallel.hpp"

namespace hetfc {

std::uint64_t seed_chain(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = master;
  for (std::uint64_t t : tags) s = RngStream::mix(s, t);
  return s;
}

namespace {

// Per-replication mean of the second-order MSPE estimator over window
// endpoints of one realization.
//
// At endpoint e (0-based index of the last observation of a length-n
// window), with betahat fit on that window:
//   u_e = (beta - betahat)^T x_e(k)
//   w_e = eps_{e,h,k} - etilde_{e,h}
//       = sum_{j>=h} alpha_j eps_{e+h-j} - beta^T x_e(k)
// and the estimator value is n u_e^2 + 2 n u_e w_e, whose expectation is the
// pre-limit second-order MSPE at sample size n (the future observation
// cancels exactly between the two pieces, so everything is in-sample).
double windowed_replication(const RatioConfig& cfg, const SubsetSpec& spec,
                            std::span<const double> beta_pop, std::size_t n,
                            std::size_t windows, RngStream& stream) {
  const int h = spec.horizon;
  const int k = static_cast<int>(spec.size());
  const std::vector<double>& alpha = cfg.dgp.filter.coeffs();
  const int filter_lag = static_cast<int>(cfg.dgp.filter.truncation_length());
  const std::size_t stride = std::max<std::size_t>(1, cfg.window_stride);
  const std::size_t span = (windows - 1) * stride;
  const PathBundle path = simulate_path(cfg.dgp, n + span, stream);
  const std::vector<double>& x = path.x;

  // Sliding normal equations over window rows r = e-n+k .. e-h (0-based
  // absolute; regressors x[r-j+1], target x[r+h]).
  const std::size_t ksz = spec.size();
  Matrix sxx(ksz, ksz);
  std::vector<double> sxy(ksz, 0.0);
  std::vector<double> row(ksz);
  auto load_row = [&](std::size_t r) {
    for (std::size_t a = 0; a < ksz; ++a)
      row[a] = x[r + 1 - static_cast<std::size_t>(spec.lags[a])];
  };
  auto add_row = [&](std::size_t r, double sign) {
    load_row(r);
    const double target = x[r + static_cast<std::size_t>(h)];
    for (std::size_t a = 0; a < ksz; ++a) {
      sxy[a] += sign * row[a] * target;
      for (std::size_t b = a; b < ksz; ++b) sxx(a, b) += sign * row[a] * row[b];
    }
  };

  std::size_t e = n - 1;
  for (std::size_t r = e - n + static_cast<std::size_t>(k);
       r + static_cast<std::size_t>(h) <= e; ++r)
    add_row(r, 1.0);
  const double rows = static_cast<double>(n - static_cast<std::size_t>(h + k) + 1);

  std::vector<double> beta_hat(ksz), xe(ksz), rhs(ksz);
  double acc = 0.0;
  for (std::size_t widx = 0;; ++widx) {
    // Solve the window's normal equations.
    Matrix r(ksz, ksz);
    for (std::size_t a = 0; a < ksz; ++a) {
      rhs[a] = sxy[a] / rows;
      for (std::size_t b = a; b < ksz; ++b) {
        r(a, b) = sxx(a, b) / rows;
        r(b, a) = r(a, b);
      }
    }
    const CholeskyFactor chol = cholesky(r);
    if (!chol.ok)
      throw ModelError("ratio_experiment: singular window at endpoint " +
                       std::to_string(e));
    beta_hat = chol.solve(rhs);

    for (std::size_t a = 0; a < ksz; ++a)
      xe[a] = x[e + 1 - static_cast<std::size_t>(spec.lags[a])];
    double u = 0.0;
    double w = 0.0;
    for (std::size_t a = 0; a < ksz; ++a) {
      u += (beta_pop[a] - beta_hat[a]) * xe[a];
      w -= beta_pop[a] * xe[a];
    }
    for (int j = h; j <= filter_lag; ++j) {
      if (static_cast<std::size_t>(j) > e + static_cast<std::size_t>(h)) break;
      w += alpha[static_cast<std::size_t>(j)] *
           path.eps[e + static_cast<std::size_t>(h) - static_cast<std::size_t>(j)];
    }
    acc += static_cast<double>(n) * (u * u + 2.0 * u * w);

    if (widx + 1 == windows) break;
    for (std::size_t step = 0; step < stride; ++step) {
      add_row(e + 1 - static_cast<std::size_t>(h), 1.0);
      add_row(e - n + static_cast<std::size_t>(k), -1.0);
      ++e;
    }
  }
  return acc / static_cast<double>(windows);
}

}  // namespace

RatioResult ratio_experiment(const RatioConfig& cfg) {
  if (cfg.horizons.empty() || cfg.n_list.empty())
    throw ModelError("ratio_experiment: empty horizon or n grid");
  if (cfg.replications < 1) throw ModelError("ratio_experiment: need replications >= 1");

  RatioResult result;
  const int k = cfg.working_order;

  for (int h : cfg.horizons) {
    const SubsetSpec spec = SubsetSpec::ar(k, h);
    HorizonPopulation hp;
    hp.h = h;
    if (cfg.route == PopulationRoute::Analytic) {
      const PopulationMoments pop = analytic_moments(cfg.dgp, spec);
      hp.g_pop = second_order_mspe(pop);
      hp.g_pop_se = 0.0;
      hp.f_h = pop.f_h;
      hp.beta = pop.beta;
    } else {
      const PopulationMoments pop = estimate_moments(
          cfg.dgp, spec, cfg.n_long,
          seed_chain(cfg.master_seed, {0xb0b, static_cast<std::uint64_t>(h)}));
      hp.g_pop = second_order_mspe(pop);
      hp.g_pop_se = pop.g_tilde_se;
      hp.f_h = pop.f_h;
      hp.beta = pop.beta;
    }
    result.population.push_back(std::move(hp));
  }

  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const std::size_t n = cfg.n_list[ni];
    for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
      const int h = cfg.horizons[hi];
      const HorizonPopulation& hp = result.population[hi];
      const SubsetSpec spec = SubsetSpec::ar(k, h);
      if (n < static_cast<std::size_t>(spec.max_lag() + h + k) + 2)
        throw ModelError("ratio_experiment: n too small for the working model");
      const std::size_t windows =
          cfg.windows_per_rep > 0 ? cfg.windows_per_rep : std::max<std::size_t>(1, n / 4);
      const std::uint64_t cell_seed = seed_chain(
          cfg.master_seed, {0xce11, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(h)});

      auto outcome = run_replications<double>(
          cfg.replications, cell_seed, cfg.workers,
          [&](std::size_t, RngStream& stream) -> double {
            return windowed_replication(cfg, spec, hp.beta, n, windows, stream);
          });

      RatioCell cell;
      cell.n = n;
      cell.h = h;
      cell.failures = outcome.failures.size();
      double sum = 0.0, sum2 = 0.0;
      for (const auto& r : outcome.results) {
        if (!r) continue;
        sum += *r;
        sum2 += *r * *r;
        ++cell.completed;
      }
      if (cell.completed < 2)
        throw ModelError("ratio_experiment: too many failed replications in a cell");
      const double mc = static_cast<double>(cell.completed);
      cell.g_nh = sum / mc;
      const double var = std::max(0.0, sum2 / mc - cell.g_nh * cell.g_nh);
      cell.se = std::sqrt(var / mc);
      cell.ratio = cell.g_nh / hp.g_pop;
      // Combined relative error of the numerator average and the population
      // denominator.
      const double rel2 = (cell.se / cell.g_nh) * (cell.se / cell.g_nh) +
                          (hp.g_pop_se / hp.g_pop) * (hp.g_pop_se / hp.g_pop);
      cell.ratio_se = std::abs(cell.ratio) * std::sqrt(rel2);
      result.cells.push_back(cell);
    }
  }
  return result;
}

SelectionResult selection_experiment(const SelectionConfig& cfg) {
  if (cfg.candidate_lags.empty())
    throw ModelError("selection_experiment: no candidates");
  if (cfg.horizons.empty() || cfg.n_list.empty())
    throw ModelError("selection_experiment: empty horizon or n grid");

  SelectionResult result;

  for (int h : cfg.horizons) {
    SelectionPopulation pop;
    pop.h = h;
    for (std::size_t c = 0; c < cfg.candidate_lags.size(); ++c) {
      SubsetSpec spec;
      spec.lags = cfg.candidate_lags[c];
      spec.horizon = h;
      spec.validate();
      const PopulationMoments m = estimate_moments(
          cfg.dgp, spec, cfg.n_long,
          seed_chain(cfg.master_seed, {0xb0b, static_cast<std::uint64_t>(h), c}));
      OracleEntry e;
      e.f = m.f_h;  // analytic, exact
      e.f_se = 0.0;
      e.g = second_order_mspe(m);
      e.g_se = m.g_tilde_se;
      pop.entries.push_back(e);
    }
    pop.sets = oracle_sets(pop.entries);
    result.population.push_back(std::move(pop));
  }

  for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
    const int h = cfg.horizons[hi];
    const SelectionPopulation& pop = result.population[hi];
    std::vector<SubsetSpec> candidates;
    for (const auto& lags : cfg.candidate_lags) {
      SubsetSpec s;
      s.lags = lags;
      s.horizon = h;
      candidates.push_back(std::move(s));
    }
    auto in_m2 = [&](std::size_t idx) {
      for (std::size_t i : pop.sets.m2)
        if (i == idx) return true;
      return false;
    };

    for (std::size_t n : cfg.n_list) {
      const std::uint64_t cell_seed = seed_chain(
          cfg.master_seed, {0x5e1e, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(h)});

      struct Hits {
        bool mric, aic, bic;
      };
      auto outcome = run_replications<Hits>(
          cfg.replications, cell_seed, cfg.workers,
          [&](std::size_t, RngStream& stream) -> Hits {
            const PathBundle path = simulate_path(cfg.dgp, n, stream);
            const ScoreAllResult scores =
                score_all(path.x, candidates, h, cfg.cn_exponent);
            return {in_m2(scores.argmin_mric), in_m2(scores.argmin_aic),
                    in_m2(scores.argmin_bic)};
          });

      SelectionCell cell;
      cell.h = h;
      cell.n = n;
      cell.failures = outcome.failures.size();
      for (const auto& r : outcome.results) {
        if (!r) continue;
        ++cell.completed;
        cell.mric_hits += r->mric;
        cell.aic_hits += r->aic;
        cell.bic_hits += r->bic;
      }
      result.cells.push_back(cell);
    }
  }
  return result;
}

namespace {

DgpSpec make_dgp(LinearFilter filter, VolatilityModel vol) {
  DgpSpec d{std::move(filter), std::move(vol), InnovationDist::std_normal()};
  return d;
}

RatioConfig base_ratio(DgpSpec dgp, std::vector<int> horizons,
                       std::vector<std::size_t> n_list, const PresetKnobs& knobs,
                       std::size_t default_reps, std::uint64_t block_tag) {
  RatioConfig cfg;
  cfg.dgp = std::move(dgp);
  cfg.working_order = 1;
  cfg.horizons = std::move(horizons);
  cfg.n_list = std::move(n_list);
  cfg.replications = knobs.replications ? knobs.replications : default_reps;
  cfg.n_long = knobs.n_long ? knobs.n_long : 2'000'000;
  cfg.master_seed = seed_chain(knobs.master_seed, {block_tag});
  cfg.workers = knobs.workers;
  return cfg;
}

}  // namespace

bool is_ratio_table(const std::string& table) {
  return table == "t1" || table == "t2" || table == "s1";
}

bool is_selection_table(const std::string& table) { return table == "t3"; }

std::vector<RatioBlock> preset_ratio_table(const std::string& table,
                                           const PresetKnobs& knobs) {
  const VolatilityModel garch = VolatilityModel::garch(0.4, {0.2}, {0.55});
  const VolatilityModel sv = VolatilityModel::sv(0.01, {0.98}, 0.04);

  std::vector<RatioBlock> blocks;
  if (table == "t1") {
    const LinearFilter ar2 = LinearFilter::from_arma({0.0, -0.5}, {});
    blocks.push_back({"garch", base_ratio(make_dgp(ar2, garch), {1, 2, 3, 4, 5},
                                          {500, 2000}, knobs, 2000, 0x11)});
    blocks.push_back({"sv", base_ratio(make_dgp(ar2, sv), {1, 2, 3, 4, 5},
                                       {500, 2000}, knobs, 2000, 0x12)});
  } else if (table == "t2") {
    const LinearFilter ma1 = LinearFilter::from_arma({}, {-0.8});
    blocks.push_back({"garch", base_ratio(make_dgp(ma1, garch), {1, 2, 3, 4, 5},
                                          {500, 2000}, knobs, 2000, 0x21)});
    blocks.push_back({"sv", base_ratio(make_dgp(ma1, sv), {1, 2, 3, 4, 5},
                                       {500, 2000}, knobs, 2000, 0x22)});
  } else if (table == "s1") {
    const LinearFilter ar1 = LinearFilter::from_arma({-0.5}, {});
    blocks.push_back({"heavy", base_ratio(make_dgp(ar1, VolatilityModel::garch(0.4, {0.5}, {0.2})),
                                          {1}, {500, 2000, 5000}, knobs, 2000, 0x31)});
    blocks.push_back({"light", base_ratio(make_dgp(ar1, VolatilityModel::garch(0.4, {0.2}, {0.55})),
                                          {1}, {500, 2000, 5000}, knobs, 2000, 0x32)});
  } else {
    throw ConfigError("unknown ratio table '" + table + "' (expected t1, t2 or s1)");
  }
  return blocks;
}

SelectionConfig preset_selection_table(const PresetKnobs& knobs) {
  SelectionConfig cfg;
  cfg.dgp = make_dgp(LinearFilter::from_arma({0.0, 0.0, 0.4}, {}),
                     VolatilityModel::garch(0.4, {0.2}, {0.55}));
  cfg.candidate_lags = {{1}, {2}};
  cfg.horizons = {1, 2, 3};
  cfg.n_list = {500, 1000, 2000, 3000};
  cfg.replications = knobs.replications ? knobs.replications : 1000;
  cfg.n_long = knobs.n_long ? knobs.n_long : 2'000'000;
  cfg.master_seed = seed_chain(knobs.master_seed, {0x33});
  cfg.workers = knobs.workers;
  cfg.cn_exponent = knobs.cn_exponent;
  return cfg;
}

}  // namespace hetfc
