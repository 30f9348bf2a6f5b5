#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hetfc/dgp.hpp"
#include "hetfc/population.hpp"
#include "hetfc/selection.hpp"

namespace hetfc {

// Chained sub-seed derivation for experiment cells: one master seed, one
// deterministic seed per (purpose, cell) tag sequence.
std::uint64_t seed_chain(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// ---------------------------------------------------------------------------
// Ratio experiment: how close the finite-n second-order MSPE is to its limit.
// Every replication simulates a fresh path of burn-in + n + h values, fits
// the working AR(k) on the first n, and evaluates
//   n * [ (x_{n+h} - xhat_{n+h} - eps_{n,h,k})^2
//         + 2 (x_{n+h} - xhat_{n+h} - eps_{n,h,k})(eps_{n,h,k} - etilde_{n,h}) ]
// with eps_{n,h,k} from the analytic projection and etilde from realized
// errors. The cell average divided by the population value gives the ratio.
// ---------------------------------------------------------------------------
enum class PopulationRoute {
  MonteCarlo,  // long-run ergodic averages (the default)
  Analytic,    // closed-form fourth moments; required when the error model is
               // so heavy-tailed that the ergodic average cannot converge
};

struct RatioConfig {
  DgpSpec dgp;
  int working_order = 1;
  std::vector<int> horizons;
  std::vector<std::size_t> n_list;
  std::size_t replications = 2000;
  std::size_t n_long = 2'000'000;
  std::uint64_t master_seed = 12345;
  std::size_t workers = 0;
  PopulationRoute route = PopulationRoute::MonteCarlo;
  // Each replication evaluates the estimator at several window endpoints of
  // one realization; by stationarity every window is an identically
  // distributed copy of the length-n experiment, so this leaves the estimand
  // untouched while shrinking the Monte Carlo error of the heavy-tailed
  // cross term. 0 windows means the automatic default max(1, n/4).
  std::size_t windows_per_rep = 0;
  std::size_t window_stride = 100;
};

struct HorizonPopulation {
  int h = 0;
  double g_pop = 0.0;
  double g_pop_se = 0.0;
  double f_h = 0.0;
  std::vector<double> beta;
};

struct RatioCell {
  std::size_t n = 0;
  int h = 0;
  double g_nh = 0.0;   // Monte Carlo second-order MSPE at this n
  double se = 0.0;
  double ratio = 0.0;  // g_nh / g_pop
  double ratio_se = 0.0;
  std::size_t completed = 0;
  std::size_t failures = 0;
};

struct RatioResult {
  std::vector<HorizonPopulation> population;
  std::vector<RatioCell> cells;
};

RatioResult ratio_experiment(const RatioConfig& cfg);

// ---------------------------------------------------------------------------
// Selection experiment: frequency with which MRIC / AIC / BIC pick a
// candidate from the oracle set M2(h).
// ---------------------------------------------------------------------------
struct SelectionConfig {
  DgpSpec dgp;
  std::vector<std::vector<int>> candidate_lags;
  std::vector<int> horizons;
  std::vector<std::size_t> n_list;
  std::size_t replications = 1000;
  std::size_t n_long = 2'000'000;
  std::uint64_t master_seed = 12345;
  std::size_t workers = 0;
  double cn_exponent = 0.6;
};

struct SelectionPopulation {
  int h = 0;
  std::vector<OracleEntry> entries;
  OracleSets sets;
};

struct SelectionCell {
  int h = 0;
  std::size_t n = 0;
  std::size_t mric_hits = 0;  // argmin landed in M2(h)
  std::size_t aic_hits = 0;
  std::size_t bic_hits = 0;
  std::size_t completed = 0;
  std::size_t failures = 0;
};

struct SelectionResult {
  std::vector<SelectionPopulation> population;
  std::vector<SelectionCell> cells;
};

SelectionResult selection_experiment(const SelectionConfig& cfg);

// ---------------------------------------------------------------------------
// Bundled experiment designs (the CLI's --table presets). A ratio table is a
// list of labelled blocks sharing the protocol; the selection table is one
// config. Knob value 0 / empty means "use the preset default".
// ---------------------------------------------------------------------------
struct PresetKnobs {
  std::size_t replications = 0;
  std::size_t n_long = 0;
  std::uint64_t master_seed = 12345;
  std::size_t workers = 0;
  double cn_exponent = 0.6;
};

struct RatioBlock {
  std::string label;
  RatioConfig config;
};

// t1: AR(2) mean, GARCH + SV error blocks, k = 1, h = 1..5, n in {500, 2000}.
// t2: MA(1) mean, same blocks and grid.
// s1: AR(1) mean, heavy- and light-tailed GARCH blocks, h = 1,
//     n in {500, 2000, 5000}.
std::vector<RatioBlock> preset_ratio_table(const std::string& table, const PresetKnobs& knobs);

// t3: lag-3 AR mean with GARCH errors, candidates {1} and {2}, h = 1..3,
//     n in {500, 1000, 2000, 3000}.
SelectionConfig preset_selection_table(const PresetKnobs& knobs);

bool is_ratio_table(const std::string& table);
bool is_selection_table(const std::string& table);

}  // namespace hetfc
