#include "bornrate/scenarios.hpp"
#include "bornrate/selftest.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

using namespace bornrate;

namespace {

struct GlobalOptions {
  std::optional<double> tol;
  unsigned threads = 1;
  bool reproducible = false;
  std::uint64_t seed = 0x5eed;
};

void apply_tolerance(std::vector<Scenario> &scenarios, const GlobalOptions &g) {
  if (!g.tol)
    return;
  for (Scenario &sc : scenarios)
    sc.quadrature.rel_tol = *g.tol;
}

void write_rows(std::ostream &os, const std::vector<Scenario> &scenarios,
                const GlobalOptions &g) {
  for (const Scenario &sc : scenarios)
    sc.validate();
  write_csv_header(os, g.reproducible);
  for (const Scenario &sc : scenarios) {
    for (const SweepRow &row : run_scenario(sc, g.threads))
      write_csv_row(os, row);
    os.flush();
  }
}

int emit(const std::vector<Scenario> &scenarios, const GlobalOptions &g,
         const std::string &out_path) {
  if (out_path.empty() || out_path == "-") {
    write_rows(std::cout, scenarios, g);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out)
    throw ConfigError("cannot open output file '" + out_path + "'");
  write_rows(out, scenarios, g);
  if (!out)
    throw std::runtime_error("failed writing '" + out_path + "'");
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Decay rates of an emitter near a dielectric plate (first-order Born, slab "
               "reference, stationary phase)"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--tol", g.tol, "Relative tolerance of the Born cubature")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--reproducible", g.reproducible, "Omit the timestamp comment from CSV output");
  app.add_option("--seed", g.seed, "Seed of the Monte-Carlo oracle (selftest)")
      ->capture_default_str();

  // rate
  auto *rate = app.add_subcommand("rate", "Evaluate a single configuration and print one row");
  std::string method = "born", orientation = "x";
  double dx = 10.0, dy = 10.0, dz = 0.2, chi_re = 0.1, chi_im = 1e-8;
  double x = 0.0, y = 0.0, z = 0.5;
  rate->add_option("--method", method, "born | slab | slab_linear | spa | spa_infinite")
      ->capture_default_str();
  rate->add_option("--orientation", orientation, "x | y | z")->capture_default_str();
  rate->add_option("--dx", dx, "Plate width along x")->capture_default_str();
  rate->add_option("--dy", dy, "Plate width along y")->capture_default_str();
  rate->add_option("--dz", dz, "Plate thickness")->capture_default_str();
  rate->add_option("--chi-re", chi_re, "Re chi")->capture_default_str();
  rate->add_option("--chi-im", chi_im, "Im chi")->capture_default_str();
  rate->add_option("--x", x, "Emitter x")->capture_default_str();
  rate->add_option("--y", y, "Emitter y")->capture_default_str();
  rate->add_option("--z", z, "Emitter height above the plate")->capture_default_str();

  // sweep
  auto *sweep = app.add_subcommand("sweep", "Run every scenario of a YAML scenario file");
  std::string config_path, sweep_out;
  sweep->add_option("config", config_path, "Scenario file")->required();
  sweep->add_option("--out", sweep_out, "Output CSV file (default: standard output)");

  // preset
  auto *preset = app.add_subcommand("preset", "Run a figure-reproduction preset");
  std::string preset_name, preset_out;
  bool dump_config = false;
  preset->add_option("name", preset_name, "fig2 | fig3 | fig4 | fig4_inset | fig5")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig4_inset", "fig5"}));
  preset->add_option("--out", preset_out, "Output CSV file (default: standard output)");
  preset->add_flag("--dump-config", dump_config,
                   "Print the preset as a scenario file instead of running it");

  auto *selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) {
      Scenario sc;
      sc.name = "rate";
      sc.method = parse_method(method);
      sc.orientation = parse_dipole(orientation);
      sc.geometry = {dx, dy, dz};
      sc.chi = Susceptibility{{chi_re, chi_im}};
      sc.emitter = {x, y, z};
      sc.sweep = {SweepAxis::z_A, z, std::nextafter(z, HUGE_VAL), 2};
      if (g.tol)
        sc.quadrature.rel_tol = *g.tol;
      sc.quadrature.threads = g.threads;
      sc.validate();
      write_csv_header(std::cout, g.reproducible);
      write_csv_row(std::cout, run_point(sc, z));
      return 0;
    }
    if (sweep->parsed()) {
      auto scenarios = load_scenarios(config_path);
      apply_tolerance(scenarios, g);
      return emit(scenarios, g, sweep_out);
    }
    if (preset->parsed()) {
      auto scenarios = presets().at(preset_name);
      apply_tolerance(scenarios, g);
      if (dump_config) {
        std::cout << serialize_scenarios(scenarios);
        return 0;
      }
      return emit(scenarios, g, preset_out);
    }
    if (selftest->parsed()) {
      SelftestOptions opts;
      if (g.tol)
        opts.rel_tol = *g.tol;
      opts.seed = g.seed;
      opts.threads = g.threads;
      return run_selftest(std::cout, opts) == 0 ? 0 : 1;
    }
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
