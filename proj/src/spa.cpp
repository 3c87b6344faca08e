#include "bornrate/spa.hpp"

#include "bornrate/core_em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <string>

namespace bornrate {

namespace {

// Power series, |x| <= 1.6.
FresnelPair fresnel_series(double x) {
  const double t = 0.5 * std::numbers::pi * x * x;
  double term = x; // x t^n / n!
  double c = 0.0, s = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double contrib = term / (2 * n + 1);
    switch (n % 4) {
    case 0: c += contrib; break;
    case 1: s += contrib; break;
    case 2: c -= contrib; break;
    case 3: s -= contrib; break;
    }
    term *= t / (n + 1);
    if (std::abs(term) < 1e-18 * std::max(std::abs(c), std::abs(s)))
      break;
  }
  return {c, s};
}

/// cos and sin of pi x^2 / 2 with x^2 reduced modulo 4 before scaling, so
/// the phase stays accurate for large x.
std::pair<double, double> half_pi_x2_cos_sin(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  const double reduced = std::fmod(hi, 4.0) + lo;
  const double arg = 0.5 * std::numbers::pi * reduced;
  return {std::cos(arg), std::sin(arg)};
}

// Continued fraction for the complementary error function, |x| > 1.6
// (modified Lentz).
FresnelPair fresnel_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double pix2 = std::numbers::pi * x * x;
  Complex b{1.0, -pix2};
  Complex cc = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  double n = -1.0;
  for (int k = 2; k < 1000; ++k) {
    n += 2.0;
    const double a = -n * (n + 1.0);
    b += 4.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const Complex del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
      break;
  }
  h *= Complex{x, -x};
  const auto [cs, sn] = half_pi_x2_cos_sin(x);
  const Complex r = Complex{0.5, 0.5} * (1.0 - Complex{cs, sn} * h);
  return {r.real(), r.imag()};
}

} // namespace

FresnelPair fresnel_cs(double x) {
  if (std::isnan(x))
    throw DomainError("fresnel_cs: argument is NaN");
  const double ax = std::abs(x);
  FresnelPair r;
  if (std::isinf(ax))
    r = {0.5, 0.5};
  else if (ax <= 1.6)
    r = fresnel_series(ax);
  else
    r = fresnel_continued_fraction(ax);
  if (x < 0.0)
    r = {-r.C, -r.S};
  return r;
}

namespace {

constexpr double kSpaRelTol = 1e-7;

void check_spa_inputs(double z_A, const Susceptibility &chi) {
  chi.validate();
  if (!(z_A > 0.0) || !std::isfinite(z_A))
    throw GeometryError("SPA: emitter height z_A must be finite and > 0");
}

void add_flags(RateResult &r, double z_A, const Susceptibility &chi) {
  if (chi.exceeds_born_range())
    r.flags.emplace_back("chi_above_born_range");
  if (z_A < 1.0)
    r.flags.emplace_back("spa_paraxial_caveat");
}

// Breakpoints on [0, d_z]: uniform in the Fresnel phase
// k^2 (d_x^2 + d_y^2) / (4q), which is linear in 1/q, then split further so
// no piece exceeds a quarter wavelength (the e^{2iq} factor).
std::vector<double> phase_breakpoints(double z_A, double d_z, double lateral_sq, double k) {
  const double u0 = 1.0 / (k * z_A), u1 = 1.0 / (k * (z_A + d_z));
  const double amplitude = 0.25 * k * k * lateral_sq;
  const auto pieces = static_cast<long long>(std::ceil(amplitude * (u0 - u1) / std::numbers::pi));
  std::vector<double> z{0.0};
  for (long long j = 1; j <= pieces; ++j) {
    const double u = u0 + (u1 - u0) * static_cast<double>(j) / static_cast<double>(pieces);
    const double zj = j == pieces ? d_z : 1.0 / (k * u) - z_A;
    const double prev = z.back();
    const auto sub = static_cast<long long>(std::ceil((zj - prev) / 0.25));
    for (long long m = 1; m < sub; ++m)
      z.push_back(prev + (zj - prev) * static_cast<double>(m) / static_cast<double>(sub));
    if (zj > z.back())
      z.push_back(zj);
  }
  if (z.back() < d_z)
    z.push_back(d_z);
  return z;
}

RateResult finish(const LineFunction &f, const std::vector<double> &points, double prefactor,
                  const Complex &chi, const char *name) {
  const auto pieces = static_cast<long long>(points.size()) - 1;
  const IntervalSpec spec{kSpaRelTol, 1e-300, std::max<long long>(5000, 4 * pieces)};
  try {
    const CubatureResult r = integrate_interval(f, points, spec);
    return RateResult{1.0 + prefactor * (chi * r.value).imag(),
                      prefactor * std::abs(chi) * r.error_estimate, r.evaluations, {}};
  } catch (const ConvergenceError &e) {
    throw ConvergenceError(std::string(name) + ": " + e.what(),
                           1.0 + prefactor * (chi * e.best_value()).imag(),
                           prefactor * std::abs(chi) * e.error_estimate(), e.evaluations());
  }
}

} // namespace

RateResult spa_rate_parallel(double z_A, const PlateGeometry &geom, const Susceptibility &chi,
                             Wavenumber k) {
  check_spa_inputs(z_A, chi);
  geom.validate();
  if (chi.chi == Complex{})
    return RateResult{};

  const double kk = k.k;
  // Int_0^{L/2} e^{i (k^2/q) x^2} dx = sqrt(pi q / 2k^2) [C(T) + i S(T)],
  // T = (L/2) sqrt(2k^2 / (pi q)).
  auto lateral = [&](double side, double q) {
    const double scale = std::sqrt(2.0 * kk * kk / (std::numbers::pi * q));
    const FresnelPair fp = fresnel_cs(0.5 * side * scale);
    return Complex{fp.C, fp.S} / scale;
  };
  LineFunction f = [&](double z) {
    const double q = kk * (z + z_A);
    const Complex a = scalar_a(q);
    return a * a * std::polar(1.0, 2.0 * q) * lateral(geom.d_x, q) * lateral(geom.d_y, q);
  };
  const auto points =
      phase_breakpoints(z_A, geom.d_z, geom.d_x * geom.d_x + geom.d_y * geom.d_y, kk);
  RateResult r = finish(f, points, 3.0 * kk * kk * kk / (2.0 * std::numbers::pi), chi.chi,
                        "spa_rate_parallel");
  add_flags(r, z_A, chi);
  return r;
}

RateResult spa_rate_parallel_infinite(double z_A, double d_z, const Susceptibility &chi,
                                      Wavenumber k) {
  check_spa_inputs(z_A, chi);
  if (!(d_z > 0.0) || !std::isfinite(d_z))
    throw GeometryError("SPA: plate thickness must be finite and > 0");
  if (chi.chi == Complex{})
    return RateResult{};

  const double kk = k.k;
  const Complex one_plus_i_sq = Complex{1.0, 1.0} * Complex{1.0, 1.0};
  LineFunction f = [&](double z) {
    const double q = kk * (z + z_A);
    const Complex a = scalar_a(q);
    return a * a * q * std::polar(1.0, 2.0 * q) * one_plus_i_sq;
  };
  RateResult r = finish(f, phase_breakpoints(z_A, d_z, 0.0, kk), 3.0 * kk / 16.0, chi.chi, "spa_rate_parallel_infinite");
  add_flags(r, z_A, chi);
  return r;
}

} // namespace bornrate
