#include "bornrate/scenarios.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

// Scenario files are YAML:
//
//   scenarios:
//     - name: plate10
//       method: born            # born | slab | slab_linear | spa | spa_infinite
//       geometry: {d_x: 10, d_y: 10, d_z: 0.2}
//       chi: {re: 0.1, im: 1e-08}
//       orientation: x          # x | y | z | [dx, dy, dz]
//       emitter: {x: 0, y: 0, z: 1}
//       sweep: {axis: z_A, start: 0.05, stop: 2, count: 80}
//       quadrature: {rel_tol: 1e-05}
//
// emitter and quadrature are optional. Unknown keys are rejected.

namespace bornrate {

namespace {

std::string context(const YAML::Node &node, const std::string &what) {
  const auto mark = node.Mark();
  if (mark.is_null())
    return what;
  return what + " (line " + std::to_string(mark.line + 1) + ")";
}

void check_keys(const YAML::Node &map, const std::string &section,
                const std::set<std::string> &allowed) {
  if (!map.IsMap())
    throw ConfigError(context(map, "'" + section + "' must be a mapping"));
  for (const auto &kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ConfigError(context(kv.first, "unknown key '" + key + "' in '" + section + "'"));
  }
}

const YAML::Node require(const YAML::Node &map, const std::string &key,
                         const std::string &section) {
  const YAML::Node n = map[key];
  if (!n)
    throw ConfigError(context(map, "missing key '" + key + "' in '" + section + "'"));
  return n;
}

std::string scalar(const YAML::Node &n, const std::string &key) {
  if (!n.IsScalar())
    throw ConfigError(context(n, "'" + key + "' must be a scalar"));
  return n.Scalar();
}

double to_double(const YAML::Node &n, const std::string &key) {
  const std::string s = scalar(n, key);
  double v = 0.0;
  const char *first = s.data();
  if (!s.empty() && s.front() == '+')
    ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(context(n, "'" + key + "' is not a finite number: '" + s + "'"));
  return v;
}

long long to_integer(const YAML::Node &n, const std::string &key) {
  const std::string s = scalar(n, key);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(context(n, "'" + key + "' is not an integer: '" + s + "'"));
  return v;
}

int to_int(const YAML::Node &n, const std::string &key) {
  const long long v = to_integer(n, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(context(n, "'" + key + "' is out of range"));
  return static_cast<int>(v);
}

PlateGeometry parse_geometry(const YAML::Node &n) {
  check_keys(n, "geometry", {"d_x", "d_y", "d_z"});
  return {to_double(require(n, "d_x", "geometry"), "d_x"),
          to_double(require(n, "d_y", "geometry"), "d_y"),
          to_double(require(n, "d_z", "geometry"), "d_z")};
}

Complex parse_chi(const YAML::Node &n) {
  check_keys(n, "chi", {"re", "im"});
  const double re = to_double(require(n, "re", "chi"), "re");
  const double im = n["im"] ? to_double(n["im"], "im") : 0.0;
  return {re, im};
}

DipoleSpec parse_orientation(const YAML::Node &n) {
  if (n.IsScalar()) {
    try {
      return parse_dipole(n.Scalar());
    } catch (const ConfigError &e) {
      throw ConfigError(context(n, e.what()));
    }
  }
  if (!n.IsSequence() || n.size() != 3)
    throw ConfigError(context(n, "'orientation' must be x, y, z or a list of 3 numbers"));
  DipoleSpec d;
  d.kind = DipoleSpec::Kind::vector;
  d.vector = {to_double(n[0], "orientation"), to_double(n[1], "orientation"),
              to_double(n[2], "orientation")};
  return d;
}

Position parse_emitter(const YAML::Node &n) {
  check_keys(n, "emitter", {"x", "y", "z"});
  Position p{0.0, 0.0, 1.0};
  if (n["x"])
    p.x = to_double(n["x"], "x");
  if (n["y"])
    p.y = to_double(n["y"], "y");
  if (n["z"])
    p.z = to_double(n["z"], "z");
  return p;
}

Sweep parse_sweep(const YAML::Node &n) {
  check_keys(n, "sweep", {"axis", "start", "stop", "count"});
  Sweep s;
  s.axis = parse_sweep_axis(scalar(require(n, "axis", "sweep"), "axis"));
  s.start = to_double(require(n, "start", "sweep"), "start");
  s.stop = to_double(require(n, "stop", "sweep"), "stop");
  s.count = to_int(require(n, "count", "sweep"), "count");
  return s;
}

QuadratureSpec parse_quadrature(const YAML::Node &n) {
  check_keys(n, "quadrature",
             {"rel_tol", "abs_tol", "max_depth", "base_order", "max_evaluations",
              "max_cell_width", "grading_distance"});
  QuadratureSpec q;
  if (n["rel_tol"])
    q.rel_tol = to_double(n["rel_tol"], "rel_tol");
  if (n["abs_tol"])
    q.abs_tol = to_double(n["abs_tol"], "abs_tol");
  if (n["max_depth"])
    q.max_depth = to_int(n["max_depth"], "max_depth");
  if (n["base_order"])
    q.base_order = to_int(n["base_order"], "base_order");
  if (n["max_evaluations"])
    q.max_evaluations = to_integer(n["max_evaluations"], "max_evaluations");
  if (n["max_cell_width"])
    q.max_cell_width = to_double(n["max_cell_width"], "max_cell_width");
  if (n["grading_distance"])
    q.grading_distance = to_double(n["grading_distance"], "grading_distance");
  return q;
}

Scenario parse_scenario(const YAML::Node &n) {
  check_keys(n, "scenario",
             {"name", "method", "geometry", "chi", "orientation", "emitter", "sweep",
              "quadrature"});
  Scenario sc;
  sc.name = scalar(require(n, "name", "scenario"), "name");
  sc.method = parse_method(scalar(require(n, "method", "scenario"), "method"));
  sc.geometry = parse_geometry(require(n, "geometry", "scenario"));
  sc.chi = Susceptibility{parse_chi(require(n, "chi", "scenario"))};
  sc.orientation = parse_orientation(require(n, "orientation", "scenario"));
  if (n["emitter"])
    sc.emitter = parse_emitter(n["emitter"]);
  sc.sweep = parse_sweep(require(n, "sweep", "scenario"));
  if (n["quadrature"])
    sc.quadrature = parse_quadrature(n["quadrature"]);
  try {
    sc.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(context(n, e.what()));
  } catch (const DomainError &e) {
    throw ConfigError(context(n, e.what()));
  }
  return sc;
}

} // namespace

std::vector<Scenario> parse_scenarios(const std::string &text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception &e) {
    throw ConfigError(std::string("malformed scenario file: ") + e.what());
  }
  if (!root || root.IsNull())
    throw ConfigError("scenario file is empty");
  check_keys(root, "top level", {"scenarios"});
  const YAML::Node list = require(root, "scenarios", "top level");
  if (!list.IsSequence() || list.size() == 0)
    throw ConfigError(context(list, "'scenarios' must be a non-empty list"));
  std::vector<Scenario> out;
  for (const auto &item : list)
    out.push_back(parse_scenario(item));
  return out;
}

std::vector<Scenario> load_scenarios(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenarios(ss.str());
}

std::string serialize_scenarios(const std::vector<Scenario> &scenarios) {
  const auto f = format_double;
  std::ostringstream os;
  os << "scenarios:\n";
  for (const Scenario &sc : scenarios) {
    const QuadratureSpec &q = sc.quadrature;
    os << "  - name: " << sc.name << '\n'
       << "    method: " << to_string(sc.method) << '\n'
       << "    geometry: {d_x: " << f(sc.geometry.d_x) << ", d_y: " << f(sc.geometry.d_y)
       << ", d_z: " << f(sc.geometry.d_z) << "}\n"
       << "    chi: {re: " << f(sc.chi.chi.real()) << ", im: " << f(sc.chi.chi.imag()) << "}\n";
    if (sc.orientation.kind == DipoleSpec::Kind::vector)
      os << "    orientation: [" << f(sc.orientation.vector.x) << ", "
         << f(sc.orientation.vector.y) << ", " << f(sc.orientation.vector.z) << "]\n";
    else
      os << "    orientation: " << sc.orientation.label() << '\n';
    os << "    emitter: {x: " << f(sc.emitter.x) << ", y: " << f(sc.emitter.y)
       << ", z: " << f(sc.emitter.z) << "}\n"
       << "    sweep: {axis: " << to_string(sc.sweep.axis) << ", start: " << f(sc.sweep.start)
       << ", stop: " << f(sc.sweep.stop) << ", count: " << sc.sweep.count << "}\n"
       << "    quadrature: {rel_tol: " << f(q.rel_tol) << ", abs_tol: " << f(q.abs_tol)
       << ", max_depth: " << q.max_depth << ", base_order: " << q.base_order
       << ", max_evaluations: " << q.max_evaluations << ", max_cell_width: "
       << f(q.max_cell_width) << ", grading_distance: " << f(q.grading_distance) << "}\n";
  }
  return os.str();
}

} // namespace bornrate
