#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bornrate/core_em.hpp"

#include <cmath>
#include <numbers>

using namespace bornrate;

namespace {

// Scalar Helmholtz Green function e^{ikr} / (4 pi r), evaluated in long
// double for the finite-difference oracle below.
std::complex<long double> scalar_green(long double x, long double y, long double z, long double k) {
  const long double r = std::sqrt(x * x + y * y + z * z);
  return std::polar(1.0L / (4.0L * std::numbers::pi_v<long double> * r), k * r);
}

// G = (I + grad grad / k^2) g by central differences, an oracle that never
// touches a(q) or b(q).
ComplexTensor3 green_by_differences(const Vec3 &u, double k) {
  const long double h = 1e-4L;
  const long double p[3] = {u.x, u.y, u.z};
  ComplexTensor3 out;
  auto g = [&](int i, long double di, int j, long double dj) {
    long double q[3] = {p[0], p[1], p[2]};
    q[i] += di;
    q[j] += dj;
    return scalar_green(q[0], q[1], q[2], k);
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::complex<long double> d2;
      if (i == j)
        d2 = (g(i, h, i, 0) - 2.0L * g(i, 0, i, 0) + g(i, -h, i, 0)) / (h * h);
      else
        d2 = (g(i, h, j, h) - g(i, h, j, -h) - g(i, -h, j, h) + g(i, -h, j, -h)) / (4 * h * h);
      const std::complex<long double> val =
          (i == j ? g(0, 0, 0, 0) : std::complex<long double>{}) + d2 / (long double)(k * k);
      out(i, j) = Complex(static_cast<double>(val.real()), static_cast<double>(val.imag()));
    }
  return out;
}

} // namespace

TEST_CASE("scalar_a and scalar_b match their closed forms") {
  for (double q : {0.05, 0.3, 1.0, 2.7, 40.0}) {
    const Complex i{0.0, 1.0};
    const Complex a = 1.0 / q + i / (q * q) - 1.0 / (q * q * q);
    const Complex b = 1.0 / q + 3.0 * i / (q * q) - 3.0 / (q * q * q);
    CHECK(std::abs(scalar_a(q) - a) <= 1e-14 * std::abs(a));
    CHECK(std::abs(scalar_b(q) - b) <= 1e-14 * std::abs(b));
  }
}

TEST_CASE("scalar_a and scalar_b reject non-positive arguments") {
  CHECK_THROWS_AS(scalar_a(0.0), DomainError);
  CHECK_THROWS_AS(scalar_b(-1.0), DomainError);
  CHECK_THROWS_AS(scalar_a(std::nan("")), DomainError);
}

TEST_CASE("vacuum_green agrees with finite differences of the scalar Green function") {
  const Wavenumber k;
  for (const Vec3 u : {Vec3{0.3, -0.2, 0.15}, Vec3{0.05, 0.1, -0.4}, Vec3{1.3, 0.4, 0.9}}) {
    const ComplexTensor3 g = vacuum_green(u, {0, 0, 0}, k);
    const ComplexTensor3 ref = green_by_differences(u, k.k);
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        scale = std::max(scale, std::abs(ref(i, j)));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(g(i, j) - ref(i, j)) <= 1e-6 * scale);
  }
}

TEST_CASE("vacuum_green is symmetric and reciprocal") {
  const Position r{0.2, -0.1, 0.7}, rp{-0.3, 0.25, 0.1};
  const ComplexTensor3 g = vacuum_green(r, rp);
  const ComplexTensor3 h = vacuum_green(rp, r);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(g(i, j) == g(j, i));
      CHECK(std::abs(g(i, j) - h(i, j)) <= 1e-15 * std::abs(g(i, j)) + 1e-300);
    }
}

TEST_CASE("vacuum_green rejects coincident points") {
  CHECK_THROWS_AS(vacuum_green({1, 2, 3}, {1, 2, 3}), DomainError);
}

TEST_CASE("Im G approaches k/6pi I at small separation") {
  const Wavenumber k;
  const double ref = k.k / (6.0 * std::numbers::pi);
  const ComplexTensor3 c = vacuum_green_imag_coincident(k);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(c(i, j).real() == doctest::Approx(i == j ? ref : 0.0).epsilon(1e-15));

  const Position r{0.4, 0.1, -0.2};
  for (const Vec3 d : {Vec3{1e-4, 0, 0}, Vec3{0, 0, 1e-4}, Vec3{6e-5, -6e-5, 5e-5}}) {
    const ComplexTensor3 g = vacuum_green(r, r + d, k);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(g(i, j).imag() - (i == j ? ref : 0.0)) < 1e-6);
  }
}

TEST_CASE("far-field Green tensor is transverse to leading order") {
  const Wavenumber k;
  const Vec3 u{30.0, 20.0, 10.0};
  const Vec3 uh = (1.0 / norm(u)) * u;
  const ComplexTensor3 g = vacuum_green(u, {0, 0, 0}, k);
  const double q = k.k * norm(u);
  const double transverse = std::abs(g.contract((1.0 / std::hypot(uh.x, uh.y)) * Vec3{uh.y, -uh.x, 0.0}));
  const double longitudinal = std::abs(g.contract(uh));
  CHECK(longitudinal < 3.0 / q * transverse);
}
