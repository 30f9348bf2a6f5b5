#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetfc/dgp.hpp"
#include "hetfc/linalg.hpp"

namespace hetfc {

enum class AutocovVariant { Plain, HStep };

// Sample autocovariance matrix of order k built from observations x_1..x_n
// (0-based storage):
//   Plain:    (n-k)^{-1}     sum_{j=k}^{n-1} x_j(k) x_j(k)^T
//   HStep(h): (n-h-k+1)^{-1} sum_{j=k}^{n-h} x_j(k) x_j(k)^T
// with x_j(k) = (x_j, ..., x_{j-k+1})^T.
struct SampleAutocovMatrix {
  Matrix entries;
  std::size_t n = 0;
  std::size_t k = 0;
  AutocovVariant variant = AutocovVariant::Plain;
  int h = 1;
};

SampleAutocovMatrix sample_autocov(std::span<const double> x, std::size_t k,
                                   AutocovVariant variant = AutocovVariant::Plain,
                                   int h = 1);

double min_eigenvalue(const SampleAutocovMatrix& m);

struct NegativeMomentRow {
  std::size_t n = 0;
  double q = 0.0;
  std::size_t k = 0;
  double mean = 0.0;      // Monte Carlo mean of lambda_min^{-q}
  double se = 0.0;
  std::size_t nonfinite = 0;
  std::size_t completed = 0;
};

struct NegativeMomentSweep {
  std::vector<NegativeMomentRow> rows;
  // Trend diagnostics: slope of log(mean) against log(n), and the ratio of
  // the last to the first mean. Bounded moments show neither growing.
  double loglog_slope = 0.0;
  double last_first_ratio = 0.0;
};

// Monte Carlo estimate of E[lambda_min^{-q}(R_hat_n(k))] over a grid of n.
// Replications are parallel over derived streams; the aggregate does not
// depend on the worker count. Non-finite lambda_min^{-q} values are counted,
// not silently dropped.
NegativeMomentSweep negative_moment_sweep(const DgpSpec& dgp, std::size_t k, double q,
                                          std::span<const std::size_t> n_grid,
                                          std::size_t reps, std::uint64_t seed,
                                          std::size_t workers = 0);

}  // namespace hetfc
