#include "bornrate/selftest.hpp"

#include "bornrate/born1.hpp"
#include "bornrate/core_em.hpp"
#include "bornrate/scenarios.hpp"
#include "bornrate/slab_ref.hpp"
#include "bornrate/spa.hpp"

#include <functional>
#include <ostream>
#include <string>

namespace bornrate {

namespace {

struct Check {
  std::string name;
  std::function<std::string(bool &)> body;
};

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace

int run_selftest(std::ostream &os, const SelftestOptions &opts) {
  QuadratureSpec quad;
  quad.rel_tol = opts.rel_tol;
  quad.abs_tol = 1e-14;
  quad.threads = opts.threads;
  const Susceptibility chi{{0.1, 1e-8}};
  const PlateGeometry cube{0.4, 0.4, 0.4};

  std::vector<Check> checks;

  checks.push_back({"vacuum_identity", [&](bool &ok) {
    const Susceptibility zero{};
    double worst = 0.0;
    const EmitterConfig e{{0, 0, 0.3}, {1, 0, 0}};
    worst = std::max(worst, std::abs(decay_rate(cube, e, zero, quad).rate - 1.0));
    for (Orientation o : {Orientation::parallel, Orientation::perpendicular}) {
      worst = std::max(worst, std::abs(slab_rate({1.0, 0.2, 0.3}, o).rate - 1.0));
      worst = std::max(worst, std::abs(slab_rate_linearized({1.0, 0.2, 0.3}, o).rate - 1.0));
    }
    worst = std::max(worst, std::abs(spa_rate_parallel(0.3, cube, zero).rate - 1.0));
    worst = std::max(worst, std::abs(spa_rate_parallel_infinite(0.3, 0.4, zero).rate - 1.0));
    ok = worst <= 1e-10;
    return "max |rate-1| = " + format_double(worst);
  }});

  checks.push_back({"green_normalization", [&](bool &ok) {
    const Position r{0.1, 0.2, 0.3};
    const ComplexTensor3 g = vacuum_green(r, r + Vec3{1e-4, 2e-4, -1e-4});
    const double ref = Wavenumber{}.k / (6.0 * std::numbers::pi);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(g(i, j).imag() - (i == j ? ref : 0.0)));
    ok = worst <= 1e-6;
    return "max |Im G - k/6pi I| = " + format_double(worst);
  }});

  checks.push_back({"tensor_scalar_consistency", [&](bool &ok) {
    const Position r{0.1, -0.05, 0.3};
    double worst = 0.0;
    for (const Vec3 d : {Vec3{1, 0, 0}, Vec3{0, 0, 1}}) {
      const Orientation o = d.z == 1.0 ? Orientation::perpendicular : Orientation::parallel;
      const double a = decay_rate_axis(cube, r, o, chi, quad).rate;
      const double b = decay_rate_tensor(cube, {r, d}, chi, quad).rate;
      worst = std::max(worst, rel_diff(a, b));
    }
    ok = worst <= 1e-10;
    return "max relative difference = " + format_double(worst);
  }});

  checks.push_back({"xy_symmetry", [&](bool &ok) {
    const Position r{0, 0, 0.3};
    const double gx = decay_rate(cube, {r, {1, 0, 0}}, chi, quad).rate;
    const double gy = decay_rate(cube, {r, {0, 1, 0}}, chi, quad).rate;
    const double d = rel_diff(gx, gy);
    ok = d <= 1e-10;
    return "relative difference = " + format_double(d);
  }});

  checks.push_back({"linearity_in_chi", [&](bool &ok) {
    const EmitterConfig e{{0, 0, 0.3}, {0, 0, 1}};
    const RateResult r1 = decay_rate(cube, e, chi, quad);
    const RateResult r3 = decay_rate(cube, e, Susceptibility{3.0 * chi.chi}, quad);
    const double d = std::abs((r3.rate - 1.0) - 3.0 * (r1.rate - 1.0));
    const double tol = r3.error_estimate + 3.0 * r1.error_estimate + 1e-14;
    ok = d <= tol;
    return "deviation = " + format_double(d) + ", tolerance = " + format_double(tol);
  }});

  checks.push_back({"monte_carlo_oracle", [&](bool &ok) {
    const Position r{0, 0, 0.3};
    const Complex x = chi.chi;
    const Field f = [&](const Position &s) {
      return Complex{(x * rate_integrand(s, r, {}, Orientation::parallel)).imag(), 0.0};
    };
    McSpec mc;
    mc.samples = 2'000'000;
    mc.seed = opts.seed;
    mc.threads = opts.threads;
    const McResult m = mc_integrate(f, cube.box(), mc);
    const double pref = scalar_rate_prefactor();
    const RateResult q = decay_rate_axis(cube, r, Orientation::parallel, chi, quad);
    const double sigma = std::hypot(pref * m.std_error, q.error_estimate);
    const double d = std::abs(1.0 + pref * m.value.real() - q.rate);
    ok = d <= 3.0 * sigma;
    return "|cubature - MC| = " + format_double(d) + ", 3 sigma = " + format_double(3.0 * sigma);
  }});

  checks.push_back({"fresnel_reference", [&](bool &ok) {
    const FresnelPair p = fresnel_cs(1.0);
    const double d = std::max(std::abs(p.C - 0.7798934003768228), std::abs(p.S - 0.4382591473903548));
    ok = d <= 1e-9;
    return "C(1) = " + format_double(p.C) + ", S(1) = " + format_double(p.S);
  }});

  checks.push_back({"slab_far_field", [&](bool &ok) {
    double worst = 0.0;
    for (Orientation o : {Orientation::parallel, Orientation::perpendicular})
      worst = std::max(worst, std::abs(slab_rate({{1.1, 1e-8}, 0.2, 50.0}, o).rate - 1.0));
    ok = worst < 1e-3;
    return "|rate-1| at z_A = 50: " + format_double(worst);
  }});

  int failures = 0;
  for (const Check &c : checks) {
    bool ok = false;
    std::string detail;
    try {
      detail = c.body(ok);
    } catch (const std::exception &e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (!ok)
      ++failures;
    os << (ok ? "PASS " : "FAIL ") << c.name << ": " << detail << '\n';
  }
  os << (failures == 0 ? "selftest passed" : "selftest failed: " + std::to_string(failures) +
                                                 " check(s)")
     << '\n';
  return failures;
}

} // namespace bornrate
