#pragma once

#include "hetfc/rng.hpp"

namespace hetfc {

enum class InnovationKind { StdNormal, NormalizedT, SymGamma };

// The i.i.d. standardized innovation law z_t: mean 0, variance 1.
//
// Three families:
//  - StdNormal
//  - NormalizedT(nu):  z = T / sigma_nu with T ~ t_nu and
//                      sigma_nu = sqrt(nu/(nu-2)), nu > 2
//  - SymGamma(xi):     |z0| ~ Gamma(xi, 1) with a fair random sign,
//                      0 < xi < 1; the raw law has variance xi(xi+1), so
//                      samples are divided by sqrt(xi(xi+1)).
//
// density() reports the density in the family's reference parameterization:
// for StdNormal and NormalizedT that is the density of the sampled
// (unit-variance) variable; for SymGamma it is the density of the raw
// variable |w|^{xi-1} e^{-|w|} / (2 Gamma(xi)), i.e. BEFORE the
// unit-variance rescaling. Callers comparing against samples must rescale.
class InnovationDist {
 public:
  // Default: standard normal.
  InnovationDist() : kind_(InnovationKind::StdNormal), nu_(0), xi_(0), scale_(1) {}

  static InnovationDist std_normal();
  static InnovationDist normalized_t(double nu);   // throws if nu <= 2
  static InnovationDist sym_gamma(double xi);      // throws if xi outside (0,1)

  InnovationKind kind() const { return kind_; }
  double nu() const { return nu_; }
  double xi() const { return xi_; }
  // Factor the raw draw is divided by to enforce unit variance
  // (1 for StdNormal, sigma_nu for NormalizedT, sqrt(xi(xi+1)) for SymGamma).
  double standardization() const { return scale_; }

  double sample(RngStream& stream) const;
  double density(double x) const;  // SymGamma throws std::domain_error at x == 0

  bool symmetric() const { return true; }

 private:
  InnovationDist(InnovationKind kind, double nu, double xi, double scale)
      : kind_(kind), nu_(nu), xi_(xi), scale_(scale) {}

  InnovationKind kind_;
  double nu_;
  double xi_;
  double scale_;
};

}  // namespace hetfc
