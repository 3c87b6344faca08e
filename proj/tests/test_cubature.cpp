#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bornrate/born1.hpp"
#include "bornrate/cubature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bornrate;

namespace {

double monomial_integral(double lo, double hi, int p) {
  return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
}

// Field value projected to the rate-relevant real part, as used by born1.
Field born_field(const Position &r_A, Orientation o, Complex chi) {
  return [=](const Position &s) {
    return Complex{(chi * rate_integrand(s, r_A, {}, o)).imag(), 0.0};
  };
}

} // namespace

TEST_CASE("constant field integrates to the box volume") {
  const Box box{{0, 0, 0}, {1, 1, 1}};
  const auto r = integrate_box([](const Position &) { return Complex{1.0, 0.0}; }, box, {});
  CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.value.imag() == 0.0);
  CHECK(r.evaluations > 0);
}

TEST_CASE("oscillatory phase factor e^{2ikz} integrates to zero over a unit cube") {
  const double k = Wavenumber{}.k;
  const Box box{{0, 0, 0}, {1, 1, 1}};
  const auto r = integrate_box(
      [k](const Position &s) { return std::polar(1.0, 2.0 * k * s.z); }, box, {});
  CHECK(std::abs(r.value) < 1e-10);
}

TEST_CASE("base rules integrate polynomials up to their design degree exactly") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> coord(-2.0, 2.0), width(0.1, 1.5);
  for (int order : {7, 15}) {
    const int degree = kronrod_degree(order);
    CHECK(degree == (order == 7 ? 11 : 23));
    QuadratureSpec spec;
    spec.base_order = order;
    spec.rel_tol = 1.0; // accept the first estimate: this tests the rule, not refinement
    spec.max_cell_width = 100.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Position lo{coord(rng), coord(rng), coord(rng)};
      const Box box{lo, lo + Vec3{width(rng), width(rng), width(rng)}};
      const int px = trial % (degree + 1);
      const int py = (degree - px) / 2;
      const int pz = degree - px - py > 0 ? (trial % 3) : 0;
      const auto r = integrate_box(
          [&](const Position &s) {
            return Complex{std::pow(s.x, px) * std::pow(s.y, py) * std::pow(s.z, pz), 0.0};
          },
          box, spec);
      const double exact = monomial_integral(box.lo.x, box.hi.x, px) *
                           monomial_integral(box.lo.y, box.hi.y, py) *
                           monomial_integral(box.lo.z, box.hi.z, pz);
      CHECK(r.evaluations == static_cast<long long>(order) * order * order);
      CHECK(std::abs(r.value.real() - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("smooth Gaussian field: cubature, Monte Carlo and closed form agree") {
  const Box box{{-0.5, -0.3, -0.2}, {0.7, 0.4, 0.5}};
  const Field f = [](const Position &s) {
    return Complex{std::exp(-(s.x * s.x + 2 * s.y * s.y + 3 * s.z * s.z)), 0.0};
  };
  auto erf_integral = [](double a, double lo, double hi) {
    const double c = std::sqrt(a);
    return 0.5 * std::sqrt(std::numbers::pi / a) * (std::erf(c * hi) - std::erf(c * lo));
  };
  const double exact = erf_integral(1, -0.5, 0.7) * erf_integral(2, -0.3, 0.4) *
                       erf_integral(3, -0.2, 0.5);
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-15;
  const auto q = integrate_box(f, box, spec);
  CHECK(std::abs(q.value.real() - exact) < 1e-12);

  McSpec mc;
  mc.samples = 1'000'000;
  const auto m = mc_integrate(f, box, mc);
  CHECK(m.std_error > 0.0);
  CHECK(std::abs(m.value.real() - q.value.real()) < 3.0 * m.std_error);
}

TEST_CASE("Monte Carlo: constant field is exact and runs are reproducible") {
  const Box box{{0, 0, 0}, {2, 1, 0.5}};
  McSpec mc;
  mc.samples = 200'000;
  const auto c = mc_integrate([](const Position &) { return Complex{3.0, -1.0}; }, box, mc);
  CHECK(c.value == Complex{3.0, -1.0});
  CHECK(c.std_error == 0.0);

  const Field f = [](const Position &s) { return Complex{std::sin(5 * s.x) * s.y, s.z}; };
  const auto a = mc_integrate(f, box, mc);
  const auto b = mc_integrate(f, box, mc);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  mc.threads = 3;
  const auto t = mc_integrate(f, box, mc);
  CHECK(a.value == t.value);
  CHECK(a.std_error == t.std_error);
  mc.seed = 99;
  CHECK(mc_integrate(f, box, mc).value != a.value);
}

TEST_CASE("cubature is bit-identical for any worker count") {
  const PlateGeometry g{2.0, 1.5, 0.3};
  const Field f = born_field({0.2, 0.1, 0.05}, Orientation::perpendicular, {0.1, 1e-8});
  QuadratureSpec spec;
  const auto one = integrate_box(f, g.box(), spec, Position{0.2, 0.1, 0.05});
  spec.threads = 4;
  const auto four = integrate_box(f, g.box(), spec, Position{0.2, 0.1, 0.05});
  CHECK(one.value == four.value);
  CHECK(one.error_estimate == four.error_estimate);
  CHECK(one.evaluations == four.evaluations);
}

TEST_CASE("tightening the tolerance never increases the error estimate") {
  struct Case {
    PlateGeometry g;
    Position r;
    Orientation o;
  };
  const Case cases[] = {
      {{0.4, 0.4, 0.4}, {0, 0, 0.3}, Orientation::parallel},
      {{3.0, 3.0, 0.2}, {0, 0, 0.5}, Orientation::perpendicular},
      {{2.0, 1.0, 0.2}, {1.05, 0, 0.02}, Orientation::parallel},
  };
  for (const Case &c : cases) {
    const Field f = born_field(c.r, c.o, {0.1, 1e-8});
    double previous = INFINITY;
    for (double tol : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
      QuadratureSpec spec;
      spec.rel_tol = tol;
      spec.abs_tol = 1e-16;
      const auto r = integrate_box(f, c.g.box(), spec, c.r);
      CHECK(r.error_estimate <= previous);
      CHECK(r.error_estimate <= std::max(spec.abs_tol, tol * std::abs(r.value)));
      previous = r.error_estimate;
    }
  }
}

TEST_CASE("near-emitter Born integrand agrees with a 1e8-sample Monte-Carlo oracle") {
  const PlateGeometry cube{0.2, 0.2, 0.2};
  const Position r{0, 0, 0.2};
  for (Orientation o : {Orientation::parallel, Orientation::perpendicular}) {
    const Field f = born_field(r, o, {0.1, 1e-8});
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    spec.abs_tol = 1e-16;
    const auto q = integrate_box(f, cube.box(), spec, r);
    McSpec mc;
    mc.samples = 100'000'000;
    const auto m = mc_integrate(f, cube.box(), mc);
    const double sigma = std::hypot(m.std_error, q.error_estimate);
    CHECK(std::abs(q.value.real() - m.value.real()) <= 3.0 * sigma);
  }
}

TEST_CASE("budget exhaustion raises ConvergenceError with the best estimate") {
  const Field f = born_field({0, 0, 0.01}, Orientation::parallel, {0.1, 1e-8});
  const PlateGeometry g{2.0, 2.0, 0.2};
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-20;
  spec.max_evaluations = 2'000'000;
  try {
    integrate_box(f, g.box(), spec, Position{0, 0, 0.01});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError &e) {
    CHECK(std::isfinite(e.best_value().real()));
    CHECK(e.best_value().real() != 0.0);
    CHECK(e.error_estimate() > 0.0);
    CHECK(e.evaluations() > 0);
  }
}

TEST_CASE("invalid inputs are rejected") {
  const Box good{{0, 0, 0}, {1, 1, 1}};
  const Field one = [](const Position &) { return Complex{1.0, 0.0}; };
  CHECK_THROWS(integrate_box(one, Box{{0, 0, 0}, {1, 0, 1}}, {}));
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS(integrate_box(one, good, bad));
  bad = {};
  bad.base_order = 5;
  CHECK_THROWS(integrate_box(one, good, bad));
  CHECK_THROWS_AS(integrate_box(one, good, {}, Position{0.5, 0.5, 1.0}), DomainError);
  McSpec mc;
  mc.samples = 999;
  CHECK_THROWS(mc_integrate(one, good, mc));
}

TEST_CASE("1-D adaptive integration") {
  const auto r = integrate_interval([](double x) { return Complex{std::sin(x), std::cos(x)}; },
                                    0.0, std::numbers::pi);
  CHECK(r.value.real() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(r.value.imag()) < 1e-13);

  const auto s = integrate_interval([](double x) { return Complex{1.0 / std::sqrt(x), 0.0}; },
                                    0.0, 1.0);
  CHECK(s.value.real() == doctest::Approx(2.0).epsilon(1e-9));

  IntervalSpec tight;
  tight.max_intervals = 3;
  CHECK_THROWS_AS(integrate_interval([](double x) { return Complex{std::cos(400.0 * x), 0.0}; },
                                     0.0, 10.0, tight),
                  ConvergenceError);
}
