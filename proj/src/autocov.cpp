#include "hetfc/autocov.hpp"

#include <cmath>
#include <sstream>

#include "hetfc/errors.hpp"
#include "hetfc/parallel.hpp"

namespace hetfc {

SampleAutocovMatrix sample_autocov(std::span<const double> x, std::size_t k,
                                   AutocovVariant variant, int h) {
  const std::size_t n = x.size();
  if (k == 0) throw ModelError("sample_autocov: order k must be >= 1");
  // 1-based row range: j = k .. n-1 (Plain) or j = k .. n-h (HStep).
  const std::size_t hh = variant == AutocovVariant::HStep ? static_cast<std::size_t>(h) : 1;
  if (variant == AutocovVariant::HStep && h < 1)
    throw ModelError("sample_autocov: horizon must be >= 1");
  const std::size_t last = variant == AutocovVariant::Plain ? n - 1 : n - hh;
  if (n < k + hh + 1) {
    std::ostringstream msg;
    msg << "sample_autocov: need n > k + h, got n = " << n << ", k = " << k
        << ", h = " << hh;
    throw ModelError(msg.str());
  }

  SampleAutocovMatrix out;
  out.n = n;
  out.k = k;
  out.variant = variant;
  out.h = static_cast<int>(hh);
  out.entries = Matrix(k, k);

  // 0-based: row j covers x[j-1], ..., x[j-k].
  for (std::size_t j = k; j <= last; ++j) {
    const double* base = x.data() + (j - k);  // x[j-k .. j-1]
    for (std::size_t a = 0; a < k; ++a) {
      const double xa = base[k - 1 - a];  // x_{j-a} in 1-based terms
      for (std::size_t b = a; b < k; ++b) out.entries(a, b) += xa * base[k - 1 - b];
    }
  }
  const double norm = 1.0 / static_cast<double>(last - k + 1);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      out.entries(a, b) *= norm;
      out.entries(b, a) = out.entries(a, b);
    }
  return out;
}

double min_eigenvalue(const SampleAutocovMatrix& m) {
  return jacobi_eigenvalues(m.entries).front();
}

NegativeMomentSweep negative_moment_sweep(const DgpSpec& dgp, std::size_t k, double q,
                                          std::span<const std::size_t> n_grid,
                                          std::size_t reps, std::uint64_t seed,
                                          std::size_t workers) {
  if (!(q > 0.0)) throw ModelError("negative_moment_sweep: q must be > 0");
  if (reps < 2) throw ModelError("negative_moment_sweep: need at least 2 replications");

  NegativeMomentSweep sweep;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    const std::uint64_t cell_seed = RngStream::mix(seed, 1000 + gi);

    struct RepValue {
      double value;
      bool finite;
    };
    auto outcome = run_replications<RepValue>(
        reps, cell_seed, workers, [&](std::size_t, RngStream& stream) -> RepValue {
          const PathBundle path = simulate_path(dgp, n, stream);
          const SampleAutocovMatrix r = sample_autocov(path.x, k, AutocovVariant::Plain);
          const double lmin = min_eigenvalue(r);
          const double v = std::pow(lmin, -q);
          return {v, std::isfinite(v)};
        });
    if (!outcome.failures.empty())
      throw ModelError("negative_moment_sweep: replication failed: " +
                       outcome.failures.front().second);

    NegativeMomentRow row;
    row.n = n;
    row.q = q;
    row.k = k;
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& r : outcome.results) {
      if (!r) continue;
      if (!r->finite) {
        ++row.nonfinite;
        continue;
      }
      sum += r->value;
      sum2 += r->value * r->value;
      ++row.completed;
    }
    if (row.completed < 2)
      throw ModelError("negative_moment_sweep: all replications non-finite");
    const double m = sum / static_cast<double>(row.completed);
    const double var =
        std::max(0.0, sum2 / static_cast<double>(row.completed) - m * m);
    row.mean = m;
    row.se = std::sqrt(var / static_cast<double>(row.completed));
    sweep.rows.push_back(row);
  }

  // Least-squares slope of log(mean) on log(n).
  const std::size_t g = sweep.rows.size();
  if (g >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& r : sweep.rows) {
      mx += std::log(static_cast<double>(r.n));
      my += std::log(r.mean);
    }
    mx /= static_cast<double>(g);
    my /= static_cast<double>(g);
    double sxy = 0.0, sxx = 0.0;
    for (const auto& r : sweep.rows) {
      const double dx = std::log(static_cast<double>(r.n)) - mx;
      sxy += dx * (std::log(r.mean) - my);
      sxx += dx * dx;
    }
    sweep.loglog_slope = sxy / sxx;
    sweep.last_first_ratio = sweep.rows.back().mean / sweep.rows.front().mean;
  } else if (g == 1) {
    sweep.last_first_ratio = 1.0;
  }
  return sweep;
}

}  // namespace hetfc
