#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bornrate/scenarios.hpp"
#include "bornrate/slab_ref.hpp"
#include "bornrate/spa.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace bornrate;

namespace {

const char *kBasic = R"(
scenarios:
  - name: basic
    method: born
    geometry: {d_x: 1, d_y: 1, d_z: 0.2}
    chi: {re: 0.1, im: 1e-08}
    orientation: z
    emitter: {x: 0, y: 0}
    sweep: {axis: z_A, start: 0.2, stop: 0.6, count: 3}
)";

std::string replace(std::string text, const std::string &from, const std::string &to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string csv(const std::vector<SweepRow> &rows, bool reproducible) {
  std::ostringstream os;
  write_csv_header(os, reproducible);
  for (const auto &r : rows)
    write_csv_row(os, r);
  return os.str();
}

} // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-8) == "1e-08");
}

TEST_CASE("sweep values are ascending with exact endpoints") {
  const Sweep s{SweepAxis::x_A, 0.0, 10.0, 200};
  const auto v = s.values();
  REQUIRE(v.size() == 200);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 10.0);
  CHECK(std::is_sorted(v.begin(), v.end()));
}

TEST_CASE("scenario file parsing") {
  const auto scs = parse_scenarios(kBasic);
  REQUIRE(scs.size() == 1);
  const Scenario &sc = scs[0];
  CHECK(sc.name == "basic");
  CHECK(sc.method == Method::born);
  CHECK(sc.geometry.d_z == 0.2);
  CHECK(sc.chi.chi == Complex{0.1, 1e-8});
  CHECK(sc.orientation.kind == DipoleSpec::Kind::z);
  CHECK(sc.emitter == Position{0, 0, 1});
  CHECK(sc.sweep.count == 3);
  CHECK(sc.quadrature.rel_tol == 1e-5);

  const auto vec = parse_scenarios(replace(kBasic, "orientation: z", "orientation: [0.6, 0, 0.8]"));
  CHECK(vec[0].orientation.kind == DipoleSpec::Kind::vector);
  CHECK(vec[0].orientation.vector == Vec3{0.6, 0, 0.8});
  CHECK(vec[0].orientation.label() == "vec:0.6:0:0.8");
}

TEST_CASE("scenario files are parsed strictly") {
  const std::string base = kBasic;
  const std::pair<std::string, std::string> bad[] = {
      {"method: born", "method: born\n    colour: red"},
      {"{d_x: 1,", "{d_x: 1, d_w: 3,"},
      {"im: 1e-08", "im: 1e-08, imag: 2"},
      {"count: 3", "count: 3, step: 1"},
      {"method: born", "method: bourn"},
      {"orientation: z", "orientation: q"},
      {"orientation: z", "orientation: [0.6, 0, 0.7]"},
      {"orientation: z", "orientation: [1, 0]"},
      {"count: 3", "count: 1"},
      {"count: 3", "count: 2.5"},
      {"start: 0.2", "start: 0.7"},
      {"d_z: 0.2", "d_z: abc"},
      {"d_z: 0.2", "d_z: -0.2"},
      {"start: 0.2", "start: -0.1"},
      {"re: 0.1", "re: nan"},
      {"im: 1e-08", "im: -1"},
      {"name: basic", "name: has space"},
      {"    method: born\n", ""},
  };
  for (const auto &[from, to] : bad) {
    CAPTURE(to);
    CHECK_THROWS_AS(parse_scenarios(replace(base, from, to)), ConfigError);
  }
  CHECK_THROWS_AS(parse_scenarios("scenario:\n  - name: x\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenarios(""), ConfigError);
  CHECK_THROWS_AS(parse_scenarios("scenarios: [\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenarios(replace(replace(base, "method: born", "method: spa"),
                                          "emitter: {x: 0, y: 0}", "emitter: {x: 0.5}")),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenarios(replace(base, "method: born", "method: spa")), ConfigError);
  CHECK_THROWS_AS(load_scenarios("/nonexistent/file.yaml"), ConfigError);

  try {
    parse_scenarios(replace(base, "method: born", "method: born\n    colour: red"));
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("every preset round-trips through the scenario format unchanged") {
  for (const auto &[name, scs] : presets()) {
    CAPTURE(name);
    for (const auto &sc : scs)
      CHECK_NOTHROW(sc.validate());
    const std::string text = serialize_scenarios(scs);
    const auto back = parse_scenarios(text);
    REQUIRE(back.size() == scs.size());
    for (std::size_t i = 0; i < scs.size(); ++i)
      CHECK(back[i] == scs[i]);
    CHECK(serialize_scenarios(back) == text);
  }
}

TEST_CASE("preset contents") {
  const auto p = presets();
  CHECK(std::set<std::string>{"fig2", "fig3", "fig4", "fig4_inset", "fig5"} ==
        [&] {
          std::set<std::string> keys;
          for (const auto &kv : p)
            keys.insert(kv.first);
          return keys;
        }());

  std::set<double> chis;
  for (const auto &sc : p.at("fig2")) {
    CHECK(sc.geometry.d_x == 10.0);
    CHECK(sc.geometry.d_z == 0.2);
    CHECK(sc.sweep == Sweep{SweepAxis::z_A, 0.05, 2.0, 80});
    chis.insert(sc.chi.chi.real());
    CHECK(sc.chi.chi.imag() == 1e-8);
  }
  CHECK(chis == std::set<double>{0.1, 0.5});

  std::set<double> sizes;
  for (const auto &sc : p.at("fig3"))
    if (sc.method == Method::born)
      sizes.insert(sc.geometry.d_x);
  CHECK(sizes == std::set<double>{3.0, 0.4, 0.2});

  for (const auto &sc : p.at("fig4")) {
    CHECK(sc.sweep == Sweep{SweepAxis::d_z, 0.05, 3.0, 120});
    CHECK(sc.emitter == Position{0, 0, 0.2});
  }
  std::set<Method> inset_methods;
  for (const auto &sc : p.at("fig4_inset")) {
    CHECK(sc.emitter == Position{0, 0, 5.0});
    inset_methods.insert(sc.method);
  }
  CHECK(inset_methods.count(Method::spa) == 1);
  CHECK(inset_methods.count(Method::spa_infinite) == 1);

  for (const auto &sc : p.at("fig5")) {
    CHECK(sc.chi.chi == Complex{0.5, 1e-8});
    CHECK(sc.emitter.z == 0.01);
    CHECK(sc.sweep == Sweep{SweepAxis::x_A, 0.0, 10.0, 200});
    CHECK(sc.geometry.d_x == 10.0);
    CHECK(sc.geometry.d_z == 0.2);
  }
}

TEST_CASE("vacuum sweep gives unit rates for every method") {
  for (Method m : {Method::born, Method::slab, Method::slab_linear, Method::spa,
                   Method::spa_infinite}) {
    Scenario sc = parse_scenarios(kBasic)[0];
    sc.method = m;
    sc.orientation = parse_dipole("x");
    sc.chi = Susceptibility{};
    for (const auto &row : run_scenario(sc))
      CHECK(row.rate == 1.0);
  }
}

TEST_CASE("sweep rows equal single-point module calls exactly") {
  Scenario sc = parse_scenarios(kBasic)[0];
  const auto rows = run_scenario(sc);
  const auto values = sc.sweep.values();
  REQUIRE(rows.size() == values.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RateResult direct = decay_rate(sc.geometry, {{0, 0, values[i]}, {0, 0, 1}}, sc.chi,
                                         sc.quadrature);
    CHECK(rows[i].sweep_value == values[i]);
    CHECK(rows[i].rate == direct.rate);
    CHECK(rows[i].error_estimate == direct.error_estimate);
    CHECK(rows[i].evaluations == direct.evaluations);
    CHECK(rows[i].flag == "ok");
    CHECK(rows[i].method == "born");
    CHECK(rows[i].orientation == "z");
  }

  sc.method = Method::slab;
  sc.sweep = {SweepAxis::d_z, 0.1, 0.5, 3};
  sc.emitter = {0, 0, 0.4};
  const auto slab_rows = run_scenario(sc);
  for (const auto &row : slab_rows)
    CHECK(row.rate ==
          slab_rate({1.0 + sc.chi.chi, row.sweep_value, 0.4}, Orientation::perpendicular).rate);

  sc.method = Method::spa;
  sc.orientation = parse_dipole("y");
  sc.geometry = {2.0, 3.0, 0.2};
  sc.sweep = {SweepAxis::z_A, 1.0, 2.0, 3};
  for (const auto &row : run_scenario(sc))
    CHECK(row.rate == spa_rate_parallel(row.sweep_value, {3.0, 2.0, 0.2}, sc.chi).rate);
}

TEST_CASE("slab rate for a tilted dipole combines the principal orientations") {
  Scenario sc = parse_scenarios(kBasic)[0];
  sc.method = Method::slab_linear;
  sc.orientation = {DipoleSpec::Kind::vector, {0.6, 0.0, 0.8}};
  const auto rows = run_scenario(sc);
  for (const auto &row : rows) {
    const SlabConfig cfg{1.0 + sc.chi.chi, 0.2, row.sweep_value};
    const double par = slab_rate_linearized(cfg, Orientation::parallel).rate;
    const double perp = slab_rate_linearized(cfg, Orientation::perpendicular).rate;
    CHECK(row.rate == doctest::Approx(1.0 + 0.36 * (par - 1) + 0.64 * (perp - 1)).epsilon(1e-14));
  }
}

TEST_CASE("CSV output is deterministic and independent of the thread count") {
  Scenario sc = parse_scenarios(kBasic)[0];
  sc.sweep.count = 5;
  const auto a = run_scenario(sc, 1);
  const auto b = run_scenario(sc, 3);
  CHECK(csv(a, true) == csv(b, true));
  const std::string text = csv(a, true);
  CHECK(text.rfind(kCsvHeader, 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  const std::string stamped = csv(a, false);
  CHECK(stamped.rfind("# ", 0) == 0);
  CHECK(stamped.substr(stamped.find('\n') + 1) == text);
}

TEST_CASE("per-point convergence failures are flagged without aborting the sweep") {
  Scenario sc = parse_scenarios(kBasic)[0];
  sc.sweep = {SweepAxis::z_A, 0.01, 0.5, 2};
  sc.quadrature.rel_tol = 1e-13;
  sc.quadrature.abs_tol = 1e-20;
  sc.quadrature.max_evaluations = 500'000;
  const auto rows = run_scenario(sc);
  REQUIRE(rows.size() == 2);
  for (const auto &row : rows) {
    CHECK(row.flag.find("no_convergence") != std::string::npos);
    CHECK(std::isfinite(row.rate));
    CHECK(row.rate != 1.0);
  }
}

TEST_CASE("soft validity flags reach the flag column") {
  Scenario sc = parse_scenarios(kBasic)[0];
  sc.chi = Susceptibility{{0.8, 0.0}};
  sc.sweep.count = 2;
  for (const auto &row : run_scenario(sc))
    CHECK(row.flag == "chi_above_born_range");
  sc.method = Method::spa;
  sc.orientation = parse_dipole("x");
  sc.chi = Susceptibility{{0.1, 0.0}};
  for (const auto &row : run_scenario(sc))
    CHECK(row.flag == "spa_paraxial_caveat");
}
