#pragma once

#include "bornrate/cubature.hpp"
#include "bornrate/types.hpp"

//! First-order Born expansion of the equal-position Green tensor near a
//! homogeneous, purely electric body, and the resulting decay rates.
//!
//! With u = r_A - s, q = k|u|, a = a(q), b = b(q) the first-order tensor is
//!   G1(r_A, r_A) = (k^4 / 16 pi^2) chi Int d^3s [a^2 I + (b^2 - 2ab) u^ (x) u^] e^{2iq}
//! and the normalized rate for a unit dipole d^ is
//!   Gamma / Gamma0 = 1 + (6 pi / k) d^ . Im G1 . d^.
//! For d^ = x^ or z^ this collapses to the scalar form with prefactor
//! 3 k^3 / 8 pi.
namespace bornrate {

/// Dielectric susceptibility chi = eps - 1 at the transition frequency.
struct Susceptibility {
  Complex chi;

  /// First-order Born is trusted for |chi| up to about 0.5.
  bool exceeds_born_range() const { return std::abs(chi) > 0.5 * (1.0 + 1e-12); }
  void validate() const;
};

/// Rectangular plate occupying [-d_x/2, d_x/2] x [-d_y/2, d_y/2] x [-d_z, 0];
/// the origin sits at the centre of its top face.
struct PlateGeometry {
  double d_x = 1.0, d_y = 1.0, d_z = 1.0;

  Box box() const { return {{-0.5 * d_x, -0.5 * d_y, -d_z}, {0.5 * d_x, 0.5 * d_y, 0.0}}; }
  void validate() const;
};

struct EmitterConfig {
  Position r_A;
  Vec3 dipole{1.0, 0.0, 0.0};

  void validate() const;
};

/// [a^2 I + (b^2 - 2ab) u^ (x) u^] e^{2iq}, the dimensionless part of the
/// first-order integrand.
ComplexTensor3 born1_tensor_kernel(const Position &s, const Position &r_A, Wavenumber k = {});

/// Pointwise integrand of G1(r_A, r_A): (k^4 / 16 pi^2) chi times the kernel.
ComplexTensor3 born1_tensor_integrand(const Position &s, const Position &r_A, Wavenumber k,
                                      const Susceptibility &chi);

/// [a^2 + (b^2 - 2ab) w / u^2] e^{2iq} with w = (x - x_A)^2 for a parallel
/// (x^) dipole and (z - z_A)^2 for a perpendicular (z^) one. The
/// susceptibility and the 3k^3/8pi prefactor are left to the caller.
Complex rate_integrand(const Position &s, const Position &r_A, Wavenumber k,
                       Orientation orientation);

/// Gamma/Gamma0 for an x^ (parallel) or z^ (perpendicular) dipole via the
/// scalar integrand.
RateResult decay_rate_axis(const PlateGeometry &geom, const Position &r_A, Orientation orientation,
                           const Susceptibility &chi, const QuadratureSpec &quad,
                           Wavenumber k = {});

/// Gamma/Gamma0 for an arbitrary unit dipole via the tensor integrand.
RateResult decay_rate_tensor(const PlateGeometry &geom, const EmitterConfig &emitter,
                             const Susceptibility &chi, const QuadratureSpec &quad,
                             Wavenumber k = {});

/// Dispatches x^ and z^ dipoles to the scalar route and everything else to
/// the tensor route.
RateResult decay_rate(const PlateGeometry &geom, const EmitterConfig &emitter,
                      const Susceptibility &chi, const QuadratureSpec &quad, Wavenumber k = {});

/// 3 k^3 / 8 pi, the scalar-route prefactor.
double scalar_rate_prefactor(Wavenumber k = {});
/// (6 pi / k) (k^4 / 16 pi^2), the tensor-route prefactor.
double tensor_rate_prefactor(Wavenumber k = {});

} // namespace bornrate
