#include "hetfc/innovations.hpp"

#include <cmath>
#include <stdexcept>

namespace hetfc {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599344;
}

InnovationDist InnovationDist::std_normal() {
  return InnovationDist(InnovationKind::StdNormal, 0.0, 0.0, 1.0);
}

InnovationDist InnovationDist::normalized_t(double nu) {
  if (!(nu > 2.0))
    throw std::invalid_argument("normalized_t: nu must be > 2 for unit variance");
  return InnovationDist(InnovationKind::NormalizedT, nu, 0.0, std::sqrt(nu / (nu - 2.0)));
}

InnovationDist InnovationDist::sym_gamma(double xi) {
  if (!(xi > 0.0) || !(xi < 1.0))
    throw std::invalid_argument("sym_gamma: xi must lie in (0, 1)");
  return InnovationDist(InnovationKind::SymGamma, 0.0, xi, std::sqrt(xi * (xi + 1.0)));
}

double InnovationDist::sample(RngStream& stream) const {
  switch (kind_) {
    case InnovationKind::StdNormal:
      return stream.normal();
    case InnovationKind::NormalizedT: {
      // T = N / sqrt(V/nu), V ~ chi^2_nu = 2 Gamma(nu/2).
      const double n = stream.normal();
      const double v = 2.0 * stream.gamma(0.5 * nu_);
      return n / std::sqrt(v / nu_) / scale_;
    }
    case InnovationKind::SymGamma: {
      const double magnitude = stream.gamma(xi_);
      const double sign = (stream.next_u64() & 1ULL) ? 1.0 : -1.0;
      return sign * magnitude / scale_;
    }
  }
  return 0.0;  // unreachable
}

double InnovationDist::density(double x) const {
  switch (kind_) {
    case InnovationKind::StdNormal:
      return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case InnovationKind::NormalizedT: {
      // sigma_nu * J(sigma_nu x) with J the t_nu density.
      const double u = scale_ * x;
      const double log_norm = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(0.5 * nu_) -
                              0.5 * std::log(nu_ * 3.14159265358979323846);
      return scale_ * std::exp(log_norm - 0.5 * (nu_ + 1.0) * std::log1p(u * u / nu_));
    }
    case InnovationKind::SymGamma: {
      if (x == 0.0)
        throw std::domain_error("sym_gamma density: unbounded at x = 0");
      const double ax = std::abs(x);
      return 0.5 * std::exp((xi_ - 1.0) * std::log(ax) - ax - std::lgamma(xi_));
    }
  }
  return 0.0;  // unreachable
}

}  // namespace hetfc
