#include "bornrate/core_em.hpp"

#include <string>

namespace bornrate {

namespace {
void require_positive(double q, const char *name) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw DomainError(std::string(name) + ": argument must be finite and > 0, got " +
                      std::to_string(q));
}
} // namespace

Complex scalar_a(double q) {
  require_positive(q, "scalar_a");
  const double inv = 1.0 / q;
  const double inv2 = inv * inv;
  return {inv - inv2 * inv, inv2};
}

Complex scalar_b(double q) {
  require_positive(q, "scalar_b");
  const double inv = 1.0 / q;
  const double inv2 = inv * inv;
  return {inv - 3.0 * inv2 * inv, 3.0 * inv2};
}

ComplexTensor3 vacuum_green(const Position &r, const Position &rp, Wavenumber k) {
  const Vec3 u = r - rp;
  const double dist = norm(u);
  if (!(dist > 0.0))
    throw DomainError("vacuum_green: source and field points coincide");

  const double q = k.k * dist;
  const Complex phase = std::polar(k.k / (4.0 * std::numbers::pi), q);
  const Complex a = scalar_a(q) * phase;
  const Complex b = scalar_b(q) * phase;
  const Vec3 uh = (1.0 / dist) * u;

  ComplexTensor3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      g(i, j) = (i == j ? a : Complex{}) - b * (uh[i] * uh[j]);
  return g;
}

ComplexTensor3 vacuum_green_imag_coincident(Wavenumber k) {
  ComplexTensor3 g;
  const double diag = k.k / (6.0 * std::numbers::pi);
  for (int i = 0; i < 3; ++i)
    g(i, i) = diag;
  return g;
}

} // namespace bornrate
