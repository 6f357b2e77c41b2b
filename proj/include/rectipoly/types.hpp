#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rectipoly {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Index = std::int32_t;

/// Default geometric tolerance (radians for angles, absolute for lengths
/// normalized by the local scale). Overridable per call and, in the CLI,
/// via --tol or the RECTIPOLY_TOL environment variable.
inline constexpr double kDefaultTol = 1e-9;

enum class ErrorKind {
  NonManifoldEdge,
  BadVertexLink,
  NonPlanarFace,
  DegenerateFace,
  ParseError,
  NonQuarterArc,
  SamplingFailure,
  CollinearityViolation,
  NotRectangleFaced,
  UnrealizablePattern,
  FoldMismatch,
  ConstructionSelfCheck,
  OpenMesh,
  InvalidArgument,
};

/// Single exception type for the whole library; `kind()` discriminates so
/// callers (CLI, tests) can map failures to behavior without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// Exact rational arithmetic on int64 numerator/denominator, used where the
/// quantities are exact by construction (Euler characteristics, facial-walk
/// degree averages, the Euler bound) so "holds with slack 0" is a crisp
/// statement rather than a tolerance judgment.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }

  bool operator==(const Rational& o) const;
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  double to_double() const { return double(num_) / double(den_); }

  /// "7", or "28/5" when the denominator is not 1.
  std::string to_string() const;

 private:
  std::int64_t num_;
  std::int64_t den_;  // always > 0, gcd(|num|, den) == 1
};

/// Deterministic RNG used by every randomized routine in the library.
/// mt19937_64 with manual bit-derived uniform doubles, so a (seed, call
/// sequence) pair yields identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  bool coin() { return (eng_() & 1u) != 0; }

  /// Uniform point on the unit sphere.
  Vec3 unit_sphere();

  /// Uniform point on the great circle of points at spherical distance
  /// pi/2 from `pole` (i.e. the unit circle in the plane orthogonal to it).
  Vec3 on_circle(const Vec3& pole);

 private:
  std::mt19937_64 eng_;
};

}  // namespace rectipoly
