#pragma once

#include <cstddef>
#include <cstdint>

#include "hetfc/innovations.hpp"
#include "hetfc/linear_process.hpp"
#include "hetfc/rng.hpp"
#include "hetfc/volatility.hpp"

namespace hetfc {

// A complete data generating process: mean filter + error model + innovation
// law. burn_in == 0 means "use the default", 5000 plus the filter truncation
// length (slow-mixing volatility needs the long warm-up).
struct DgpSpec {
  LinearFilter filter;
  VolatilityModel volatility;
  InnovationDist innovations;
  std::size_t burn_in = 0;

  std::size_t effective_burn_in() const {
    return burn_in > 0 ? burn_in : 5000 + filter.truncation_length();
  }
};

// x, eps and sigma2 share indexing: eps[i] is the error entering x[i] at lag
// zero. The pre-sample errors consumed by the convolution are internal.
struct PathBundle {
  std::vector<double> x;
  std::vector<double> eps;
  std::vector<double> sigma2;
};

PathBundle simulate_path(const DgpSpec& dgp, std::size_t n, RngStream& stream);

}  // namespace hetfc
