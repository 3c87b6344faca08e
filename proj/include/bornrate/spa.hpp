#pragma once

#include "bornrate/born1.hpp"
#include "bornrate/cubature.hpp"
#include "bornrate/types.hpp"

//! Stationary-phase approximations to the parallel-dipole rate above a
//! rectangular plate, and the Fresnel integrals they reduce to.
namespace bornrate {

/// C(x) = Int_0^x cos(pi t^2 / 2) dt, S(x) = Int_0^x sin(pi t^2 / 2) dt.
struct FresnelPair {
  double C = 0.0;
  double S = 0.0;
};

FresnelPair fresnel_cs(double x);

/// Paraxial rate for a parallel dipole at (0, 0, z_A) with the lateral
/// integrals reduced to Fresnel integrals. Flags "spa_paraxial_caveat" when
/// z_A < 1 (one wavelength).
RateResult spa_rate_parallel(double z_A, const PlateGeometry &geom, const Susceptibility &chi,
                             Wavenumber k = {});

/// Limit of spa_rate_parallel for d_x, d_y -> infinity.
RateResult spa_rate_parallel_infinite(double z_A, double d_z, const Susceptibility &chi,
                                      Wavenumber k = {});

} // namespace bornrate
