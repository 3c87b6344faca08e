#pragma once

#include "bornrate/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

//! Adaptive cubature over axis-aligned boxes for oscillatory, near-singular
//! complex integrands, a 1-D adaptive Gauss-Kronrod integrator, and a seeded
//! Monte-Carlo oracle.
namespace bornrate {

struct Box {
  Position lo, hi;

  Vec3 widths() const { return hi - lo; }
  Position center() const { return 0.5 * (lo + hi); }
  double volume() const {
    const Vec3 w = widths();
    return w.x * w.y * w.z;
  }
  /// Euclidean distance from p to the closed box (0 inside).
  double distance_to(const Position &p) const;
  bool contains_closed(const Position &p) const { return distance_to(p) == 0.0; }

  void validate() const;
};

struct QuadratureSpec {
  double rel_tol = 1e-5;
  double abs_tol = 1e-9;
  int max_depth = 30;
  /// Points per axis of the Kronrod rule: 7 (embeds 3-point Gauss) or 15
  /// (embeds 7-point Gauss).
  int base_order = 7;
  long long max_evaluations = 4'000'000'000LL;
  /// Cells are pre-split until no side exceeds this (a quarter wavelength).
  double max_cell_width = 0.25;
  /// Graded refinement toward the focus point is applied when the focus
  /// lies closer than this to the box.
  double grading_distance = 0.1;
  /// Worker threads; 0 selects the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 1;

  void validate() const;
};

struct McSpec {
  long long samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;

  void validate() const;
};

struct CubatureResult {
  Complex value;
  double error_estimate = 0.0;
  long long evaluations = 0;
};

struct McResult {
  Complex value;
  double std_error = 0.0;
  long long samples = 0;
};

using Field = std::function<Complex(const Position &)>;
using LineFunction = std::function<Complex(double)>;

/// Integrates f over box. Cells are bisected along their longest side(s)
/// until the summed Kronrod-minus-Gauss differences drop below
/// max(abs_tol, rel_tol * |total|). When focus is given and lies within
/// spec.grading_distance of the box, cells are first graded toward it so
/// that no cell is wider than its distance to the focus.
///
/// Throws ConvergenceError (with the best estimate) when the evaluation
/// budget or the depth limit is exhausted.
CubatureResult integrate_box(const Field &f, const Box &box, const QuadratureSpec &spec,
                             std::optional<Position> focus = std::nullopt);

/// Plain Monte Carlo with a counter-based generator; identical (seed,
/// samples) give bit-identical results for any thread count.
McResult mc_integrate(const Field &f, const Box &box, const McSpec &spec);

struct IntervalSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  long long max_intervals = 5000;
};

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
CubatureResult integrate_interval(const LineFunction &f, double a, double b,
                                  const IntervalSpec &spec = {});

/// Same, starting from the pieces delimited by the strictly increasing
/// breakpoints (e.g. one per oscillation of a known phase).
CubatureResult integrate_interval(const LineFunction &f, const std::vector<double> &points,
                                  const IntervalSpec &spec = {});

/// Degree of polynomial exactness per axis of the Kronrod rule with the
/// given number of points.
int kronrod_degree(int base_order);

} // namespace bornrate
