#include "rectipoly/types.hpp"

#include <cmath>
#include <cstdlib>

namespace rectipoly {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorKind::BadVertexLink: return "BadVertexLink";
    case ErrorKind::NonPlanarFace: return "NonPlanarFace";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonQuarterArc: return "NonQuarterArc";
    case ErrorKind::SamplingFailure: return "SamplingFailure";
    case ErrorKind::CollinearityViolation: return "CollinearityViolation";
    case ErrorKind::NotRectangleFaced: return "NotRectangleFaced";
    case ErrorKind::UnrealizablePattern: return "UnrealizablePattern";
    case ErrorKind::FoldMismatch: return "FoldMismatch";
    case ErrorKind::ConstructionSelfCheck: return "ConstructionSelfCheck";
    case ErrorKind::OpenMesh: return "OpenMesh";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw Error(ErrorKind::InvalidArgument, "Rational with zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g ? num / g : num;
  den_ = g ? den / g : den;
}

namespace {

// All intermediate products fit in __int128; results are re-normalized
// through the constructor.
using I128 = __int128;

Rational from_i128(I128 num, I128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  I128 a = num < 0 ? -num : num;
  I128 b = den;
  while (b != 0) {
    const I128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(static_cast<std::int64_t>(num),
                  static_cast<std::int64_t>(den));
}

}  // namespace

Rational Rational::operator+(const Rational& o) const {
  return from_i128(I128(num_) * o.den_ + I128(o.num_) * den_,
                   I128(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return from_i128(I128(num_) * o.den_ - I128(o.num_) * den_,
                   I128(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return from_i128(I128(num_) * o.num_, I128(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) {
    throw Error(ErrorKind::InvalidArgument, "Rational division by zero");
  }
  return from_i128(I128(num_) * o.den_, I128(den_) * o.num_);
}

bool Rational::operator==(const Rational& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

bool Rational::operator<(const Rational& o) const {
  return I128(num_) * o.den_ < I128(o.num_) * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Vec3 Rng::unit_sphere() {
  const double z = uniform(-1.0, 1.0);
  const double phi = uniform(0.0, 2.0 * M_PI);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

Vec3 Rng::on_circle(const Vec3& pole) {
  // Orthonormal basis of the plane orthogonal to the pole.
  const Vec3 seed = std::abs(pole.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 u = pole.cross(seed).normalized();
  const Vec3 v = pole.cross(u);
  const double phi = uniform(0.0, 2.0 * M_PI);
  return (u * std::cos(phi) + v * std::sin(phi)).normalized();
}

}  // namespace rectipoly
