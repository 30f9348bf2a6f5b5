#include "hetfc/dgp.hpp"

namespace hetfc {

PathBundle simulate_path(const DgpSpec& dgp, std::size_t n, RngStream& stream) {
  const std::size_t lag = dgp.filter.truncation_length();
  const ErrorPath errors = dgp.volatility.simulate_errors(
      dgp.innovations, n + lag, dgp.effective_burn_in(), stream);

  PathBundle out;
  out.x = dgp.filter.simulate(errors.eps);
  out.eps.assign(errors.eps.begin() + static_cast<std::ptrdiff_t>(lag), errors.eps.end());
  out.sigma2.assign(errors.sigma2.begin() + static_cast<std::ptrdiff_t>(lag),
                    errors.sigma2.end());
  return out;
}

}  // namespace hetfc
