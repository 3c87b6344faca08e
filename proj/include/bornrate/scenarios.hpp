#pragma once

#include "bornrate/born1.hpp"
#include "bornrate/cubature.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

//! Parameter sweeps over the rate methods, figure-reproduction presets, the
//! scenario file format and CSV output.
namespace bornrate {

enum class Method { born, slab, slab_linear, spa, spa_infinite };
enum class SweepAxis { z_A, d_z, x_A };

/// Dipole orientation as written in scenario files: one of the axes or an
/// explicit unit vector.
struct DipoleSpec {
  enum class Kind { x, y, z, vector };
  Kind kind = Kind::x;
  Vec3 vector{1.0, 0.0, 0.0};

  Vec3 unit() const;
  std::string label() const;
  friend bool operator==(const DipoleSpec &, const DipoleSpec &) = default;
};

struct Sweep {
  SweepAxis axis = SweepAxis::z_A;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  /// Evenly spaced values, ascending, with the endpoints reproduced exactly.
  std::vector<double> values() const;
  friend bool operator==(const Sweep &, const Sweep &) = default;
};

struct Scenario {
  std::string name;
  Method method = Method::born;
  PlateGeometry geometry;
  Susceptibility chi;
  DipoleSpec orientation;
  /// Fixed emitter coordinates; the swept coordinate (or the plate
  /// thickness for d_z sweeps) is overridden per point.
  Position emitter{0.0, 0.0, 1.0};
  Sweep sweep;
  QuadratureSpec quadrature;

  void validate() const;
};

bool operator==(const Scenario &a, const Scenario &b);

struct SweepRow {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string method;
  std::string orientation;
  double rate = 1.0;
  double error_estimate = 0.0;
  long long evaluations = 0;
  /// "ok", or '|'-joined caveats such as "no_convergence".
  std::string flag = "ok";
};

std::string to_string(Method m);
std::string to_string(SweepAxis a);
Method parse_method(const std::string &s);
SweepAxis parse_sweep_axis(const std::string &s);
DipoleSpec parse_dipole(const std::string &s);

/// Rate at a single sweep value; per-point convergence failures are
/// reported through the row flag instead of thrown.
SweepRow run_point(const Scenario &sc, double sweep_value);

/// One row per sweep value in ascending order. Points may be computed
/// concurrently; the rows are identical for any thread count.
std::vector<SweepRow> run_scenario(const Scenario &sc, unsigned threads = 1);

/// Figure-reproduction presets: fig2, fig3, fig4, fig4_inset, fig5.
std::map<std::string, std::vector<Scenario>> presets();

//------------------------------------------------------------------------------
// Scenario files (YAML) and CSV

std::vector<Scenario> parse_scenarios(const std::string &text);
std::vector<Scenario> load_scenarios(const std::string &path);
std::string serialize_scenarios(const std::vector<Scenario> &scenarios);

inline constexpr const char *kCsvHeader =
    "sweep_name,sweep_value,method,orientation,rate,error_estimate,evaluations,flag";

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

void write_csv_header(std::ostream &os, bool reproducible);
void write_csv_row(std::ostream &os, const SweepRow &row);

} // namespace bornrate
