#include "bornrate/scenarios.hpp"

#include "bornrate/slab_ref.hpp"
#include "bornrate/spa.hpp"
#include "parallel.hpp"

#include <cctype>
#include <charconv>
#include <string_view>
#include <chrono>
#include <ctime>
#include <ostream>

namespace bornrate {

//------------------------------------------------------------------------------
// Names

std::string to_string(Method m) {
  switch (m) {
  case Method::born: return "born";
  case Method::slab: return "slab";
  case Method::slab_linear: return "slab_linear";
  case Method::spa: return "spa";
  case Method::spa_infinite: return "spa_infinite";
  }
  return "?";
}

std::string to_string(SweepAxis a) {
  switch (a) {
  case SweepAxis::z_A: return "z_A";
  case SweepAxis::d_z: return "d_z";
  case SweepAxis::x_A: return "x_A";
  }
  return "?";
}

Method parse_method(const std::string &s) {
  for (Method m : {Method::born, Method::slab, Method::slab_linear, Method::spa,
                   Method::spa_infinite})
    if (to_string(m) == s)
      return m;
  throw ConfigError("unknown method '" + s +
                    "' (expected born, slab, slab_linear, spa or spa_infinite)");
}

SweepAxis parse_sweep_axis(const std::string &s) {
  for (SweepAxis a : {SweepAxis::z_A, SweepAxis::d_z, SweepAxis::x_A})
    if (to_string(a) == s)
      return a;
  throw ConfigError("unknown sweep axis '" + s + "' (expected z_A, d_z or x_A)");
}

DipoleSpec parse_dipole(const std::string &s) {
  if (s == "x")
    return {DipoleSpec::Kind::x, {1.0, 0.0, 0.0}};
  if (s == "y")
    return {DipoleSpec::Kind::y, {0.0, 1.0, 0.0}};
  if (s == "z")
    return {DipoleSpec::Kind::z, {0.0, 0.0, 1.0}};
  throw ConfigError("unknown orientation '" + s + "' (expected x, y, z or a 3-vector)");
}

Vec3 DipoleSpec::unit() const {
  switch (kind) {
  case Kind::x: return {1.0, 0.0, 0.0};
  case Kind::y: return {0.0, 1.0, 0.0};
  case Kind::z: return {0.0, 0.0, 1.0};
  case Kind::vector: break;
  }
  return vector;
}

std::string DipoleSpec::label() const {
  switch (kind) {
  case Kind::x: return "x";
  case Kind::y: return "y";
  case Kind::z: return "z";
  case Kind::vector: break;
  }
  return "vec:" + format_double(vector.x) + ":" + format_double(vector.y) + ":" +
         format_double(vector.z);
}

//------------------------------------------------------------------------------
// Sweeps

std::vector<double> Sweep::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  v.back() = stop;
  return v;
}

namespace {

struct PointSetup {
  PlateGeometry geometry;
  Position emitter;
};

PointSetup setup_for(const Scenario &sc, double value) {
  PointSetup p{sc.geometry, sc.emitter};
  switch (sc.sweep.axis) {
  case SweepAxis::z_A: p.emitter.z = value; break;
  case SweepAxis::x_A: p.emitter.x = value; break;
  case SweepAxis::d_z: p.geometry.d_z = value; break;
  }
  return p;
}

bool is_spa(Method m) { return m == Method::spa || m == Method::spa_infinite; }

RateResult slab_result(const Scenario &sc, const PointSetup &p, bool linear) {
  const SlabConfig cfg{1.0 + sc.chi.chi, p.geometry.d_z, p.emitter.z};
  auto one = [&](Orientation o) {
    return linear ? slab_rate_linearized(cfg, o) : slab_rate(cfg, o);
  };
  const Vec3 d = sc.orientation.unit();
  const double w_par = d.x * d.x + d.y * d.y;
  const double w_perp = d.z * d.z;
  if (w_perp == 0.0)
    return one(Orientation::parallel);
  if (w_par == 0.0)
    return one(Orientation::perpendicular);
  // Laterally isotropic medium: the rate is a weighted sum of the two
  // principal orientations.
  RateResult par = one(Orientation::parallel);
  RateResult perp = one(Orientation::perpendicular);
  RateResult r;
  r.rate = 1.0 + w_par * (par.rate - 1.0) + w_perp * (perp.rate - 1.0);
  r.error_estimate = w_par * par.error_estimate + w_perp * perp.error_estimate;
  r.evaluations = par.evaluations + perp.evaluations;
  r.flags = par.flags;
  return r;
}

RateResult compute(const Scenario &sc, const PointSetup &p) {
  switch (sc.method) {
  case Method::born:
    return decay_rate(p.geometry, EmitterConfig{p.emitter, sc.orientation.unit()}, sc.chi,
                      sc.quadrature);
  case Method::slab: return slab_result(sc, p, false);
  case Method::slab_linear: return slab_result(sc, p, true);
  case Method::spa: {
    PlateGeometry g = p.geometry;
    if (sc.orientation.kind == DipoleSpec::Kind::y)
      std::swap(g.d_x, g.d_y);
    return spa_rate_parallel(p.emitter.z, g, sc.chi);
  }
  case Method::spa_infinite: return spa_rate_parallel_infinite(p.emitter.z, p.geometry.d_z, sc.chi);
  }
  throw ConfigError("unhandled method");
}

std::string join_flags(const std::vector<std::string> &flags) {
  if (flags.empty())
    return "ok";
  std::string s;
  for (const auto &f : flags) {
    if (!s.empty())
      s += '|';
    s += f;
  }
  return s;
}

bool same_quadrature(const QuadratureSpec &a, const QuadratureSpec &b) {
  return a.rel_tol == b.rel_tol && a.abs_tol == b.abs_tol && a.max_depth == b.max_depth &&
         a.base_order == b.base_order && a.max_evaluations == b.max_evaluations &&
         a.max_cell_width == b.max_cell_width && a.grading_distance == b.grading_distance;
}

} // namespace

void Scenario::validate() const {
  const std::string where = "scenario '" + name + "': ";
  if (name.empty())
    throw ConfigError("scenario name must not be empty");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && std::string_view("_.-+=").find(c) == std::string_view::npos)
      throw ConfigError(where + "name may contain only letters, digits and _.-+=");
  if (sweep.count < 2)
    throw ConfigError(where + "sweep count must be >= 2");
  if (!(sweep.start < sweep.stop) || !std::isfinite(sweep.start) || !std::isfinite(sweep.stop))
    throw ConfigError(where + "sweep requires finite start < stop");
  chi.validate();
  geometry.validate();
  quadrature.validate();
  if (orientation.kind == DipoleSpec::Kind::vector &&
      std::abs(norm(orientation.vector) - 1.0) > 1e-12)
    throw ConfigError(where + "orientation vector must have unit length");
  if (is_spa(method)) {
    if (orientation.kind != DipoleSpec::Kind::x && orientation.kind != DipoleSpec::Kind::y)
      throw ConfigError(where + "stationary-phase methods support only x or y dipoles");
    if (sweep.axis == SweepAxis::x_A || emitter.x != 0.0 || emitter.y != 0.0)
      throw ConfigError(where + "stationary-phase methods require the emitter on the z axis");
  }
  for (double v : sweep.values()) {
    const PointSetup p = setup_for(*this, v);
    p.geometry.validate();
    if (method == Method::born) {
      if (!(p.geometry.box().distance_to(p.emitter) > 0.0))
        throw GeometryError(where + "sweep value " + format_double(v) +
                            " places the emitter inside or on the plate");
    } else if (!(p.emitter.z > 0.0)) {
      throw GeometryError(where + "emitter height must be > 0 at sweep value " +
                          format_double(v));
    }
  }
}

bool operator==(const Scenario &a, const Scenario &b) {
  return a.name == b.name && a.method == b.method && a.geometry.d_x == b.geometry.d_x &&
         a.geometry.d_y == b.geometry.d_y && a.geometry.d_z == b.geometry.d_z &&
         a.chi.chi == b.chi.chi && a.orientation == b.orientation && a.emitter == b.emitter &&
         a.sweep == b.sweep && same_quadrature(a.quadrature, b.quadrature);
}

SweepRow run_point(const Scenario &sc, double sweep_value) {
  SweepRow row;
  row.sweep_name = sc.name;
  row.sweep_value = sweep_value;
  row.method = to_string(sc.method);
  row.orientation = sc.orientation.label();
  const PointSetup p = setup_for(sc, sweep_value);
  try {
    const RateResult r = compute(sc, p);
    row.rate = r.rate;
    row.error_estimate = r.error_estimate;
    row.evaluations = r.evaluations;
    row.flag = join_flags(r.flags);
  } catch (const ConvergenceError &e) {
    row.rate = e.best_value().real();
    row.error_estimate = e.error_estimate();
    row.evaluations = e.evaluations();
    std::vector<std::string> flags{"no_convergence"};
    if (sc.chi.exceeds_born_range() && sc.method != Method::slab)
      flags.push_back("chi_above_born_range");
    row.flag = join_flags(flags);
  }
  return row;
}

std::vector<SweepRow> run_scenario(const Scenario &sc, unsigned threads) {
  sc.validate();
  const std::vector<double> values = sc.sweep.values();
  std::vector<SweepRow> rows(values.size());
  detail::parallel_for(values.size(), threads,
                       [&](std::size_t i) { rows[i] = run_point(sc, values[i]); });
  return rows;
}

//------------------------------------------------------------------------------
// Presets

namespace {

Scenario make(std::string name, Method m, PlateGeometry g, Complex chi, const char *o,
              Position emitter, Sweep sweep) {
  Scenario sc;
  sc.name = std::move(name);
  sc.method = m;
  sc.geometry = g;
  sc.chi = Susceptibility{chi};
  sc.orientation = parse_dipole(o);
  sc.emitter = emitter;
  sc.sweep = sweep;
  return sc;
}

constexpr double kLossTangent = 1e-8;

} // namespace

std::map<std::string, std::vector<Scenario>> presets() {
  std::map<std::string, std::vector<Scenario>> out;
  const Sweep height{SweepAxis::z_A, 0.05, 2.0, 80};
  const Sweep thickness{SweepAxis::d_z, 0.05, 3.0, 120};
  const Sweep lateral{SweepAxis::x_A, 0.0, 10.0, 200};
  const PlateGeometry plate10{10.0, 10.0, 0.2};

  auto &fig2 = out["fig2"];
  for (double chi_r : {0.1, 0.5}) {
    const std::string name = "fig2_chi" + format_double(chi_r);
    for (Method m : {Method::born, Method::slab, Method::slab_linear})
      for (const char *o : {"x", "z"})
        fig2.push_back(make(name, m, plate10, {chi_r, kLossTangent}, o, {0, 0, 1}, height));
  }

  auto &fig3 = out["fig3"];
  for (double d : {3.0, 0.4, 0.2})
    for (const char *o : {"x", "z"})
      fig3.push_back(make("fig3_d" + format_double(d), Method::born, {d, d, 0.2},
                          {0.1, kLossTangent}, o, {0, 0, 1}, height));
  for (Method m : {Method::slab, Method::slab_linear})
    for (const char *o : {"x", "z"})
      fig3.push_back(
          make("fig3_slab", m, {3.0, 3.0, 0.2}, {0.1, kLossTangent}, o, {0, 0, 1}, height));

  auto &fig4 = out["fig4"];
  for (Method m : {Method::born, Method::slab, Method::slab_linear})
    for (const char *o : {"x", "z"})
      fig4.push_back(make("fig4", m, plate10, {0.1, kLossTangent}, o, {0, 0, 0.2}, thickness));

  auto &inset = out["fig4_inset"];
  for (Method m : {Method::born, Method::slab, Method::slab_linear, Method::spa,
                   Method::spa_infinite})
    inset.push_back(
        make("fig4_inset", m, plate10, {0.1, kLossTangent}, "x", {0, 0, 5.0}, thickness));

  auto &fig5 = out["fig5"];
  for (const char *o : {"x", "z"})
    fig5.push_back(
        make("fig5", Method::born, plate10, {0.5, kLossTangent}, o, {0, 0, 0.01}, lateral));
  return out;
}

//------------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream &os, bool reproducible) {
  if (!reproducible) {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated " << stamp << '\n';
  }
  os << kCsvHeader << '\n';
}

void write_csv_row(std::ostream &os, const SweepRow &row) {
  os << row.sweep_name << ',' << format_double(row.sweep_value) << ',' << row.method << ','
     << row.orientation << ',' << format_double(row.rate) << ','
     << format_double(row.error_estimate) << ',' << row.evaluations << ',' << row.flag << '\n';
}

} // namespace bornrate
