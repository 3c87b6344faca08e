#include "bornrate/born1.hpp"

#include "bornrate/core_em.hpp"

#include <string>

namespace bornrate {

void Susceptibility::validate() const {
  if (!std::isfinite(chi.real()) || !std::isfinite(chi.imag()))
    throw DomainError("Susceptibility: chi must be finite");
  if (chi.imag() < 0.0)
    throw DomainError("Susceptibility: Im chi must be >= 0 (passive medium)");
}

void PlateGeometry::validate() const {
  if (!(d_x > 0.0) || !(d_y > 0.0) || !(d_z > 0.0) || !std::isfinite(d_x) ||
      !std::isfinite(d_y) || !std::isfinite(d_z))
    throw GeometryError("PlateGeometry: d_x, d_y, d_z must be finite and > 0");
}

void EmitterConfig::validate() const {
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(r_A[i]) || !std::isfinite(dipole[i]))
      throw GeometryError("EmitterConfig: position and dipole must be finite");
  if (std::abs(norm(dipole) - 1.0) > 1e-12)
    throw GeometryError("EmitterConfig: dipole must be a unit vector");
}

double scalar_rate_prefactor(Wavenumber k) {
  return 3.0 * k.k * k.k * k.k / (8.0 * std::numbers::pi);
}

double tensor_rate_prefactor(Wavenumber k) {
  const double pi = std::numbers::pi;
  return (6.0 * pi / k.k) * (k.k * k.k * k.k * k.k / (16.0 * pi * pi));
}

namespace {

struct KernelTerms {
  Complex a2;    // a(q)^2
  Complex c;     // (b^2 - 2ab) / u^2
  Complex phase; // e^{2iq}
  Vec3 u;        // r_A - s
};

KernelTerms kernel_terms(const Position &s, const Position &r_A, Wavenumber k) {
  const Vec3 u = r_A - s;
  const double u2 = dot(u, u);
  if (!(u2 > 0.0))
    throw DomainError("Born integrand: integration point coincides with the emitter");
  const double q = k.k * std::sqrt(u2);
  const Complex a = scalar_a(q);
  const Complex b = scalar_b(q);
  return {a * a, (b * b - 2.0 * a * b) / u2, std::polar(1.0, 2.0 * q), u};
}

ComplexTensor3 kernel_tensor(const KernelTerms &t) {
  ComplexTensor3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = ((i == j ? t.a2 : Complex{}) + t.c * (t.u[i] * t.u[j])) * t.phase;
  return m;
}

void check_emitter_outside(const PlateGeometry &geom, const Position &r_A) {
  geom.validate();
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(r_A[i]))
      throw GeometryError("emitter position must be finite");
  if (!(geom.box().distance_to(r_A) > 0.0))
    throw GeometryError("emitter lies inside or on the boundary of the plate");
}

RateResult vacuum_result() { return RateResult{1.0, 0.0, 0, {}}; }

RateResult integrate_rate(const Field &projected, const PlateGeometry &geom, const Position &r_A,
                          const Susceptibility &chi, const QuadratureSpec &quad,
                          double prefactor) {
  try {
    const CubatureResult res = integrate_box(projected, geom.box(), quad, r_A);
    RateResult out{1.0 + prefactor * res.value.real(), prefactor * res.error_estimate,
                   res.evaluations, {}};
    if (chi.exceeds_born_range())
      out.flags.emplace_back("chi_above_born_range");
    return out;
  } catch (const ConvergenceError &e) {
    throw ConvergenceError(std::string("decay_rate: ") + e.what(),
                           1.0 + prefactor * e.best_value().real(),
                           prefactor * e.error_estimate(), e.evaluations());
  }
}

} // namespace

ComplexTensor3 born1_tensor_kernel(const Position &s, const Position &r_A, Wavenumber k) {
  return kernel_tensor(kernel_terms(s, r_A, k));
}

ComplexTensor3 born1_tensor_integrand(const Position &s, const Position &r_A, Wavenumber k,
                                      const Susceptibility &chi) {
  const double pi = std::numbers::pi;
  const Complex scale = (k.k * k.k * k.k * k.k / (16.0 * pi * pi)) * chi.chi;
  ComplexTensor3 m = born1_tensor_kernel(s, r_A, k);
  for (auto &row : m.c)
    for (auto &v : row)
      v *= scale;
  return m;
}

Complex rate_integrand(const Position &s, const Position &r_A, Wavenumber k,
                       Orientation orientation) {
  const KernelTerms t = kernel_terms(s, r_A, k);
  const double w = orientation == Orientation::parallel ? t.u.x * t.u.x : t.u.z * t.u.z;
  return (t.a2 + t.c * w) * t.phase;
}

RateResult decay_rate_axis(const PlateGeometry &geom, const Position &r_A, Orientation orientation,
                           const Susceptibility &chi, const QuadratureSpec &quad, Wavenumber k) {
  chi.validate();
  check_emitter_outside(geom, r_A);
  if (chi.chi == Complex{})
    return vacuum_result();

  const Complex x = chi.chi;
  Field projected = [&](const Position &s) {
    return Complex{(x * rate_integrand(s, r_A, k, orientation)).imag(), 0.0};
  };
  return integrate_rate(projected, geom, r_A, chi, quad, scalar_rate_prefactor(k));
}

RateResult decay_rate_tensor(const PlateGeometry &geom, const EmitterConfig &emitter,
                             const Susceptibility &chi, const QuadratureSpec &quad, Wavenumber k) {
  chi.validate();
  emitter.validate();
  check_emitter_outside(geom, emitter.r_A);
  if (chi.chi == Complex{})
    return vacuum_result();

  const Complex x = chi.chi;
  const Position r_A = emitter.r_A;
  const Vec3 d = emitter.dipole;
  Field projected = [&](const Position &s) {
    const ComplexTensor3 m = kernel_tensor(kernel_terms(s, r_A, k));
    return Complex{(x * m.contract(d)).imag(), 0.0};
  };
  return integrate_rate(projected, geom, r_A, chi, quad, tensor_rate_prefactor(k));
}

RateResult decay_rate(const PlateGeometry &geom, const EmitterConfig &emitter,
                      const Susceptibility &chi, const QuadratureSpec &quad, Wavenumber k) {
  emitter.validate();
  if (emitter.dipole == Vec3{1.0, 0.0, 0.0})
    return decay_rate_axis(geom, emitter.r_A, Orientation::parallel, chi, quad, k);
  if (emitter.dipole == Vec3{0.0, 0.0, 1.0})
    return decay_rate_axis(geom, emitter.r_A, Orientation::perpendicular, chi, quad, k);
  return decay_rate_tensor(geom, emitter, chi, quad, k);
}

} // namespace bornrate
