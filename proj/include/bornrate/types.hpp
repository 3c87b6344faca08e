#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bornrate {

using Complex = std::complex<double>;

/// Wavenumber of the transition when lengths are measured in transition
/// wavelengths.
inline constexpr double kTransitionWavenumber = 2.0 * std::numbers::pi;

struct Wavenumber {
  double k = kTransitionWavenumber;
};

/// Point or displacement in units of the transition wavelength.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double &operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator-(const Vec3 &a, const Vec3 &b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3 operator+(const Vec3 &a, const Vec3 &b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3 operator*(double s, const Vec3 &a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

using Position = Vec3;

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

/// 3x3 complex tensor, row-major.
struct ComplexTensor3 {
  std::array<std::array<Complex, 3>, 3> c{};

  Complex &operator()(int i, int j) { return c[i][j]; }
  const Complex &operator()(int i, int j) const { return c[i][j]; }

  Complex trace() const { return c[0][0] + c[1][1] + c[2][2]; }

  ComplexTensor3 transpose() const {
    ComplexTensor3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.c[i][j] = c[j][i];
    return t;
  }

  ComplexTensor3 imag() const {
    ComplexTensor3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.c[i][j] = c[i][j].imag();
    return t;
  }

  /// d . T . d for a real vector d.
  Complex contract(const Vec3 &d) const {
    Complex s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        s += d[i] * c[i][j] * d[j];
    return s;
  }
};

//------------------------------------------------------------------------------
// Error types

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Emitter/plate configuration that violates a geometric precondition.
class GeometryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed scenario or configuration input.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An integration could not meet its tolerance within its budget.
/// Carries the best available estimate so callers can still report it.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, Complex best_value, double error_estimate,
                   long long evaluations)
      : std::runtime_error(what), best_value_(best_value), error_estimate_(error_estimate),
        evaluations_(evaluations) {}

  Complex best_value() const { return best_value_; }
  double error_estimate() const { return error_estimate_; }
  long long evaluations() const { return evaluations_; }

private:
  Complex best_value_;
  double error_estimate_;
  long long evaluations_;
};

} // namespace bornrate

namespace bornrate {

/// Dipole orientation relative to the plate surface: parallel means x^,
/// perpendicular means z^.
enum class Orientation { parallel, perpendicular };

/// Decay rate normalized to the free-space value, with the integration
/// error propagated into the same units.
struct RateResult {
  double rate = 1.0;
  double error_estimate = 0.0;
  long long evaluations = 0;
  /// Soft validity caveats, e.g. "chi_above_born_range".
  std::vector<std::string> flags;
};

} // namespace bornrate
