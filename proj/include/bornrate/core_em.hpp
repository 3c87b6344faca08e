#pragma once

#include "bornrate/types.hpp"

//! Free-space electromagnetic primitives in dimensionless units.
//!
//! All lengths are in units of the transition wavelength, so the transition
//! wavenumber is 2*pi. The vacuum Green tensor away from the source point is
//!   G(r, r') = (k / 4 pi) (a(q) I - b(q) u^ (x) u^) exp(i q),   q = k |r - r'|
//! with
//!   a(q) = 1/q + i/q^2 - 1/q^3,   b(q) = 1/q + 3i/q^2 - 3/q^3.
namespace bornrate {

Complex scalar_a(double q);
Complex scalar_b(double q);

/// Vacuum Green tensor between two distinct points. The contact
/// (delta-function) term is never evaluated.
ComplexTensor3 vacuum_green(const Position &r, const Position &rp, Wavenumber k = {});

/// Im G(r, r) = (k / 6 pi) I, the coincidence limit that fixes the
/// free-space decay rate.
ComplexTensor3 vacuum_green_imag_coincident(Wavenumber k = {});

} // namespace bornrate
