#include "bornrate/born1.hpp"
#include "bornrate/core_em.hpp"
#include "bornrate/scenarios.hpp"
#include "bornrate/selftest.hpp"
#include "bornrate/slab_ref.hpp"
#include "bornrate/spa.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace bornrate;

namespace {

Vec3 to_vec(const std::array<double, 3> &a) { return {a[0], a[1], a[2]}; }

QuadratureSpec make_quadrature(double rel_tol, double abs_tol, long long max_evaluations,
                               unsigned threads) {
  QuadratureSpec q;
  q.rel_tol = rel_tol;
  q.abs_tol = abs_tol;
  q.max_evaluations = max_evaluations;
  q.threads = threads;
  return q;
}

py::dict row_to_dict(const SweepRow &r) {
  py::dict d;
  d["sweep_name"] = r.sweep_name;
  d["sweep_value"] = r.sweep_value;
  d["method"] = r.method;
  d["orientation"] = r.orientation;
  d["rate"] = r.rate;
  d["error_estimate"] = r.error_estimate;
  d["evaluations"] = r.evaluations;
  d["flag"] = r.flag;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decay rates of an emitter near a dielectric plate";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::enum_<Orientation>(m, "Orientation")
      .value("parallel", Orientation::parallel)
      .value("perpendicular", Orientation::perpendicular);

  py::class_<RateResult>(m, "RateResult")
      .def_readonly("rate", &RateResult::rate)
      .def_readonly("error_estimate", &RateResult::error_estimate)
      .def_readonly("evaluations", &RateResult::evaluations)
      .def_readonly("flags", &RateResult::flags)
      .def("__repr__", [](const RateResult &r) {
        std::ostringstream os;
        os << "RateResult(rate=" << format_double(r.rate)
           << ", error_estimate=" << format_double(r.error_estimate)
           << ", evaluations=" << r.evaluations << ")";
        return os.str();
      });

  py::class_<FresnelPair>(m, "FresnelPair")
      .def_readonly("C", &FresnelPair::C)
      .def_readonly("S", &FresnelPair::S);

  m.def(
      "decay_rate",
      [](std::array<double, 3> plate, std::array<double, 3> emitter, std::array<double, 3> dipole,
         Complex chi, double rel_tol, double abs_tol, long long max_evaluations,
         unsigned threads) {
        const QuadratureSpec q = make_quadrature(rel_tol, abs_tol, max_evaluations, threads);
        py::gil_scoped_release release;
        return decay_rate({plate[0], plate[1], plate[2]}, {to_vec(emitter), to_vec(dipole)},
                          Susceptibility{chi}, q);
      },
      py::arg("plate"), py::arg("emitter"), py::arg("dipole"), py::arg("chi"),
      py::arg("rel_tol") = QuadratureSpec{}.rel_tol, py::arg("abs_tol") = QuadratureSpec{}.abs_tol,
      py::arg("max_evaluations") = QuadratureSpec{}.max_evaluations, py::arg("threads") = 1u,
      "First-order Born rate Gamma/Gamma0 for a plate (d_x, d_y, d_z), emitter position and "
      "unit dipole.");

  m.def(
      "slab_rate",
      [](Complex epsilon, double thickness, double z_A, Orientation o) {
        return slab_rate({epsilon, thickness, z_A}, o);
      },
      py::arg("epsilon"), py::arg("thickness"), py::arg("z_A"), py::arg("orientation"));
  m.def(
      "slab_rate_linearized",
      [](Complex epsilon, double thickness, double z_A, Orientation o) {
        return slab_rate_linearized({epsilon, thickness, z_A}, o);
      },
      py::arg("epsilon"), py::arg("thickness"), py::arg("z_A"), py::arg("orientation"));
  m.def(
      "spa_rate_parallel",
      [](double z_A, std::array<double, 3> plate, Complex chi) {
        return spa_rate_parallel(z_A, {plate[0], plate[1], plate[2]}, Susceptibility{chi});
      },
      py::arg("z_A"), py::arg("plate"), py::arg("chi"));
  m.def(
      "spa_rate_parallel_infinite",
      [](double z_A, double d_z, Complex chi) {
        return spa_rate_parallel_infinite(z_A, d_z, Susceptibility{chi});
      },
      py::arg("z_A"), py::arg("d_z"), py::arg("chi"));

  m.def("fresnel_cs", &fresnel_cs, py::arg("x"));
  m.def(
      "vacuum_green",
      [](std::array<double, 3> r, std::array<double, 3> rp) {
        const ComplexTensor3 g = vacuum_green(to_vec(r), to_vec(rp));
        std::array<std::array<Complex, 3>, 3> out{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            out[i][j] = g(i, j);
        return out;
      },
      py::arg("r"), py::arg("r_prime"), "Free-space Green tensor as nested 3x3 lists.");

  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto &kv : presets())
      names.push_back(kv.first);
    return names;
  });
  m.def(
      "preset_config", [](const std::string &name) { return serialize_scenarios(presets().at(name)); },
      py::arg("name"), "Scenario-file text of a figure preset.");
  m.def(
      "run_config",
      [](const std::string &text, unsigned threads) {
        const auto scenarios = parse_scenarios(text);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          for (const auto &sc : scenarios)
            for (auto &r : run_scenario(sc, threads))
              rows.push_back(std::move(r));
        }
        py::list out;
        for (const auto &r : rows)
          out.append(row_to_dict(r));
        return out;
      },
      py::arg("text"), py::arg("threads") = 1u,
      "Runs every scenario of a scenario-file text and returns one dict per row.");
  m.def(
      "to_csv",
      [](const py::list &rows, bool reproducible) {
        std::ostringstream os;
        write_csv_header(os, reproducible);
        for (const auto &item : rows) {
          const py::dict d = item.cast<py::dict>();
          SweepRow r;
          r.sweep_name = d["sweep_name"].cast<std::string>();
          r.sweep_value = d["sweep_value"].cast<double>();
          r.method = d["method"].cast<std::string>();
          r.orientation = d["orientation"].cast<std::string>();
          r.rate = d["rate"].cast<double>();
          r.error_estimate = d["error_estimate"].cast<double>();
          r.evaluations = d["evaluations"].cast<long long>();
          r.flag = d["flag"].cast<std::string>();
          write_csv_row(os, r);
        }
        return os.str();
      },
      py::arg("rows"), py::arg("reproducible") = true);
  m.def(
      "selftest",
      [](std::uint64_t seed) {
        SelftestOptions opts;
        opts.seed = seed;
        std::ostringstream os;
        int failures = 0;
        {
          py::gil_scoped_release release;
          failures = run_selftest(os, opts);
        }
        return py::make_tuple(failures, os.str());
      },
      py::arg("seed") = SelftestOptions{}.seed);

#ifdef VERSION_INFO
#define BORNRATE_STR(x) #x
#define BORNRATE_XSTR(x) BORNRATE_STR(x)
  m.attr("__version__") = BORNRATE_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
