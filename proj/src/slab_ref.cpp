#include "bornrate/slab_ref.hpp"

#include <functional>
#include <string>

namespace bornrate {

void SlabConfig::validate() const {
  if (!std::isfinite(epsilon.real()) || !std::isfinite(epsilon.imag()) || epsilon.imag() < 0.0)
    throw DomainError("SlabConfig: epsilon must be finite with Im eps >= 0");
  if (!(thickness > 0.0) || !std::isfinite(thickness))
    throw DomainError("SlabConfig: thickness must be finite and > 0");
  if (!(z_A > 0.0) || !std::isfinite(z_A))
    throw GeometryError("SlabConfig: emitter height z_A must be > 0");
}

namespace {

Complex upper_sqrt(Complex v) {
  Complex r = std::sqrt(v);
  if (r.imag() < 0.0)
    r = -r;
  return r;
}

void require_upper(Complex v, const char *what) {
  if (v.imag() < 0.0)
    throw std::logic_error(std::string("branch violation: Im ") + what + " < 0");
}

Complex vertical_wavevector(double s) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw DomainError("lateral wavevector s must be finite and >= 0");
  return upper_sqrt(Complex{1.0 - s * s, 0.0});
}

Complex r1_from(Complex s_z, Complex s_z1, Complex epsilon, Polarization pol) {
  // No contrast; also avoids 0/0 at grazing incidence.
  if (epsilon == 1.0)
    return 0.0;
  if (pol == Polarization::TE)
    return (s_z - s_z1) / (s_z + s_z1);
  return (epsilon * s_z - s_z1) / (epsilon * s_z + s_z1);
}

} // namespace

Complex fresnel_r_sz(Complex s_z, Complex epsilon, Polarization pol) {
  require_upper(s_z, "s_z");
  const Complex s_z1 = upper_sqrt(s_z * s_z + (epsilon - 1.0));
  require_upper(s_z1, "s_z1");
  return r1_from(s_z, s_z1, epsilon, pol);
}

Complex slab_reflection_sz(Complex s_z, Complex epsilon, double d, Wavenumber k,
                           Polarization pol) {
  require_upper(s_z, "s_z");
  const Complex s_z1 = upper_sqrt(s_z * s_z + (epsilon - 1.0));
  require_upper(s_z1, "s_z1");
  const Complex r1 = r1_from(s_z, s_z1, epsilon, pol);
  // Back face: r2 = -r1.
  const Complex round_trip = std::exp(Complex{0.0, 2.0 * k.k * d} * s_z1);
  return r1 * (1.0 - round_trip) / (1.0 - r1 * r1 * round_trip);
}

Complex slab_reflection_linear_sz(Complex s_z, Complex chi, double d, Wavenumber k,
                                  Polarization pol) {
  require_upper(s_z, "s_z");
  const Complex sz2 = s_z * s_z;
  const Complex r1 = pol == Polarization::TE ? -chi / (4.0 * sz2)
                                             : chi * (2.0 * sz2 - 1.0) / (4.0 * sz2);
  return r1 * (1.0 - std::exp(Complex{0.0, 2.0 * k.k * d} * s_z));
}

Complex fresnel_r(double s, Complex epsilon, Polarization pol) {
  return fresnel_r_sz(vertical_wavevector(s), epsilon, pol);
}

Complex slab_reflection(double s, Complex epsilon, double d, Wavenumber k, Polarization pol) {
  if (!(d >= 0.0))
    throw DomainError("slab_reflection: thickness must be >= 0");
  return slab_reflection_sz(vertical_wavevector(s), epsilon, d, k, pol);
}

namespace {

using Reflection = std::function<Complex(Complex s_z, Polarization)>;

/// Integral of F(s_z) ds_z along 1 -> R -> (arc) -> iR -> iT.
CubatureResult integrate_sz_path(const std::function<Complex(Complex)> &integrand, double radius,
                                 double top, const IntervalSpec &spec) {
  CubatureResult total;
  auto accumulate = [&](const CubatureResult &r) {
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
  };

  if (radius > 1.0)
    accumulate(integrate_interval([&](double t) { return integrand(Complex{t, 0.0}); }, 1.0,
                                  radius, spec));
  accumulate(integrate_interval(
      [&](double phi) {
        const Complex s_z = std::polar(radius, phi);
        return integrand(s_z) * Complex{0.0, 1.0} * s_z;
      },
      0.0, 0.5 * std::numbers::pi, spec));
  if (top > radius)
    accumulate(integrate_interval(
        [&](double tau) { return integrand(Complex{0.0, tau}) * Complex{0.0, 1.0}; }, radius, top,
        spec));
  return total;
}

RateResult rate_from_reflection(const SlabConfig &config, Orientation orientation, Wavenumber k,
                                const IntervalSpec &spec, const Reflection &reflect) {
  const Complex chi = config.epsilon - 1.0;
  if (chi == Complex{})
    return RateResult{1.0, 0.0, 0, {}};

  // Guided modes satisfy |s_z|^2 < |chi|; keep the arc well outside.
  const double radius = std::max(1.0, 2.0 * std::sqrt(std::abs(chi)));
  // Evanescent tail e^{-2k z_A tau} negligible beyond top.
  const double top = radius + 50.0 / (2.0 * k.k * config.z_A);
  const Complex i2kz{0.0, 2.0 * k.k * config.z_A};

  std::function<Complex(Complex)> integrand;
  double prefactor = 0.0;
  if (orientation == Orientation::perpendicular) {
    prefactor = 1.5;
    integrand = [&](Complex s_z) {
      return (1.0 - s_z * s_z) * reflect(s_z, Polarization::TM) * std::exp(i2kz * s_z);
    };
  } else {
    prefactor = 0.75;
    integrand = [&](Complex s_z) {
      return (reflect(s_z, Polarization::TE) - s_z * s_z * reflect(s_z, Polarization::TM)) *
             std::exp(i2kz * s_z);
    };
  }

  try {
    const CubatureResult r = integrate_sz_path(integrand, radius, top, spec);
    // (s / s_z) ds = -ds_z
    return RateResult{1.0 - prefactor * r.value.real(), prefactor * r.error_estimate,
                      r.evaluations, {}};
  } catch (const ConvergenceError &e) {
    throw ConvergenceError(std::string("slab_rate: ") + e.what(),
                           1.0 - prefactor * e.best_value().real(),
                           prefactor * e.error_estimate(), e.evaluations());
  }
}

} // namespace

RateResult slab_rate(const SlabConfig &config, Orientation orientation, Wavenumber k,
                     const IntervalSpec &spec) {
  config.validate();
  return rate_from_reflection(config, orientation, k, spec, [&](Complex s_z, Polarization pol) {
    return slab_reflection_sz(s_z, config.epsilon, config.thickness, k, pol);
  });
}

RateResult slab_rate_linearized(const SlabConfig &config, Orientation orientation, Wavenumber k,
                                const IntervalSpec &spec) {
  config.validate();
  const Complex chi = config.epsilon - 1.0;
  RateResult r =
      rate_from_reflection(config, orientation, k, spec, [&](Complex s_z, Polarization pol) {
        return slab_reflection_linear_sz(s_z, chi, config.thickness, k, pol);
      });
  if (std::abs(chi) > 0.5 * (1.0 + 1e-12))
    r.flags.emplace_back("chi_above_born_range");
  return r;
}

} // namespace bornrate
