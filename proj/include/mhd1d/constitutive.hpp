#ifndef MHD1D_CONSTITUTIVE_HPP
#define MHD1D_CONSTITUTIVE_HPP

#include <mhd1d/core.hpp>

#include <cmath>

namespace mhd1d {

/// Pointwise thermodynamic arguments of the material laws.
struct PointThermo {
  Scalar v;
  Scalar theta;
  Vec2 b = Vec2::Zero();
  Scalar ux_over_v = 0.0;  // strain rate u_x / v
};

inline Scalar viscosity_mu(Scalar v, const Params& p) {
  if (!(v > 0.0)) throw Error("viscosity_mu: v must be positive");
  return p.mu1 + p.mu2 * std::pow(v, -p.alpha);
}

inline Scalar conductivity_kappa(Scalar theta, const Params& p) {
  if (!(theta > 0.0)) throw Error("conductivity_kappa: theta must be positive");
  return p.kappa0 * std::pow(theta, p.beta);
}

inline Scalar pressure(Scalar v, Scalar theta, const Params& p) {
  if (!(v > 0.0 && theta > 0.0)) throw Error("pressure: v, theta must be positive");
  return p.R * theta / v;
}

inline Scalar internal_energy(Scalar theta, const Params& p) {
  if (!(theta > 0.0)) throw Error("internal_energy: theta must be positive");
  return p.cv * theta;
}

/// sigma = mu u_x/v - (P + |b|^2/2), the stress whose gradient drives u.
inline Scalar effective_stress_sigma(const PointThermo& pt, const Params& p) {
  return viscosity_mu(pt.v, p) * pt.ux_over_v -
         (pressure(pt.v, pt.theta, p) + 0.5 * pt.b.squaredNorm());
}

}  // namespace mhd1d

#endif
