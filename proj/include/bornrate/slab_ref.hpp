#pragma once

#include "bornrate/cubature.hpp"
#include "bornrate/types.hpp"

//! Reference decay rates above an infinitely extended dielectric slab of
//! thickness d whose top face is the plane z = 0.
//!
//! With s the lateral wavevector in units of k, s_z = sqrt(1 - s^2) and
//! s_z1 = sqrt(eps - s^2) (both with Im >= 0):
//!   Gamma_perp / Gamma0 = 1 + (3/2) Re Int_0^inf ds (s^3 / s_z) r_TM e^{2ik z_A s_z}
//!   Gamma_par  / Gamma0 = 1 + (3/4) Re Int_0^inf ds (s / s_z) [r_TE - s_z^2 r_TM] e^{2ik z_A s_z}
//!
//! The integrals are evaluated in the s_z plane, where s ds = -s_z ds_z
//! removes the branch point at s = 1. The path from s_z = 1 to s_z = i*inf is
//! deformed through the first quadrant so that it stays clear of the
//! guided-mode poles, which sit just left of the imaginary s_z axis for a
//! weakly absorbing slab.
namespace bornrate {

enum class Polarization { TE, TM };

struct SlabConfig {
  Complex epsilon{1.0, 0.0};
  double thickness = 1.0;
  double z_A = 1.0;

  void validate() const;
};

/// Single-interface vacuum-to-medium Fresnel coefficient.
Complex fresnel_r(double s, Complex epsilon, Polarization pol);

/// Two-interface (Airy) reflection coefficient of the slab.
Complex slab_reflection(double s, Complex epsilon, double d, Wavenumber k, Polarization pol);

/// Same coefficients as functions of a complex vertical wavevector s_z;
/// the argument must satisfy Im s_z >= 0.
Complex fresnel_r_sz(Complex s_z, Complex epsilon, Polarization pol);
Complex slab_reflection_sz(Complex s_z, Complex epsilon, double d, Wavenumber k,
                           Polarization pol);
/// First-order-in-chi expansion of slab_reflection_sz.
Complex slab_reflection_linear_sz(Complex s_z, Complex chi, double d, Wavenumber k,
                                  Polarization pol);

RateResult slab_rate(const SlabConfig &config, Orientation orientation, Wavenumber k = {},
                     const IntervalSpec &spec = {});

/// Rate with the reflection coefficients replaced by their first-order
/// expansion in chi = eps - 1; the counterpart of the first-order Born
/// result for an infinite slab.
RateResult slab_rate_linearized(const SlabConfig &config, Orientation orientation,
                                Wavenumber k = {}, const IntervalSpec &spec = {});

} // namespace bornrate
