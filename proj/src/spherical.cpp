#include "rectipoly/spherical.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "rectipoly/ortho.hpp"

namespace rectipoly {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

double rectilinear_deviation(double angle) {
  const double k = std::lround(angle / kHalfPi);
  return std::abs(angle - k * kHalfPi);
}

// Polygon angle at points[i] for a closed spherical polygon: the angle at
// p_i between the great-circle tangents toward the two neighbors, measured
// on one consistent side of the traversal, in (0, 2*pi].
double polygon_angle(const std::vector<Vec3>& pts, std::size_t i) {
  const std::size_t n = pts.size();
  const Vec3& p = pts[i];
  auto tangent_toward = [&p](const Vec3& q) {
    return (q - p * p.dot(q)).normalized();
  };
  const Vec3 tn = tangent_toward(pts[(i + 1) % n]);
  const Vec3 tp = tangent_toward(pts[(i + n - 1) % n]);
  double ang = std::atan2(tn.cross(tp).dot(p), tn.dot(tp));
  if (ang <= 0) ang += 2.0 * M_PI;
  return ang;
}

// Whether unit vector q lies on the (closed) minor arc from a to b, all
// three on the same great circle with unit normal nrm.
bool on_arc(const Vec3& a, const Vec3& b, const Vec3& nrm, const Vec3& q) {
  constexpr double eps = 1e-12;
  return a.cross(q).dot(nrm) >= -eps && q.cross(b).dot(nrm) >= -eps;
}

}  // namespace

double separation(const Vec3& p, const Vec3& q) {
  return std::atan2(p.cross(q).norm(), p.dot(q));
}

SeparationClass classify_separation(const Vec3& p, const Vec3& q, double tol) {
  const double d = separation(p, q);
  if (std::abs(d - M_PI) <= tol) return SeparationClass::Antipodal;
  if (std::abs(d - kHalfPi) <= tol) return SeparationClass::Quarter;
  return SeparationClass::Other;
}

SphericalLink spherical_link(const Mesh& mesh, Index v, double tol) {
  if (v < 0 || v >= mesh.vertex_count())
    throw Error(ErrorKind::InvalidArgument,
                "vertex index " + std::to_string(v) + " out of range");
  const auto& star = mesh.stars[v];
  if (!star.empty() && star.back().face == -1)
    throw Error(ErrorKind::InvalidArgument,
                "vertex " + std::to_string(v) +
                    " is on the boundary and has no closed link");

  SphericalLink link;
  const std::size_t n = star.size();
  link.points.reserve(n);
  for (const StarEntry& entry : star)
    link.points.push_back(
        (mesh.vertices[entry.neighbor] - mesh.vertices[v]).normalized());

  link.separations.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = separation(link.points[i], link.points[(i + 1) % n]);
    link.separations[i] = d;
    if (std::abs(d - kHalfPi) > tol)
      throw Error(ErrorKind::NonQuarterArc,
                  "face " + std::to_string(star[i].face) + " has angle " +
                      std::to_string(d) + " (not pi/2) at vertex " +
                      std::to_string(v));
  }

  link.angles.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    link.angles[i] = dihedral_angle(mesh, star[i].edge);
  return link;
}

bool is_orthogonal_path(const SphericalLink& link, Index i, Index j,
                        double tol) {
  const Index n = Index(link.points.size());
  if (i < 0 || i >= n || j < 0 || j >= n || i == j)
    throw Error(ErrorKind::InvalidArgument,
                "is_orthogonal_path needs two distinct link positions");
  for (Index k = (i + 1) % n; k != j; k = (k + 1) % n)
    if (rectilinear_deviation(link.angles[k]) > tol) return false;
  return true;
}

LocalVerdict local_constraint_check(const SphericalLink& link, double tol) {
  LocalVerdict verdict;
  for (Index i = 0; i < Index(link.angles.size()); ++i)
    if (rectilinear_deviation(link.angles[i]) > tol)
      verdict.red_positions.push_back(i);
  verdict.red_count = Index(verdict.red_positions.size());

  const double loose = 10.0 * tol;
  std::ostringstream detail;

  if (verdict.red_count == 1 || verdict.red_count == 3) {
    verdict.status = LocalStatus::LemmaViolation;
    verdict.violated_lemma =
        verdict.red_count == 1 ? "1-red" : "3-red";
    detail << "impossible red count " << verdict.red_count;
  } else if (verdict.red_count == 2) {
    const Vec3& p = link.points[verdict.red_positions[0]];
    const Vec3& q = link.points[verdict.red_positions[1]];
    verdict.red_pair_separation = separation(p, q);
    verdict.antipodal =
        std::abs(verdict.red_pair_separation - M_PI) <= loose;
    const double diff = link.angles[verdict.red_positions[0]] -
                        link.angles[verdict.red_positions[1]];
    const double r = std::abs(std::fmod(diff, kHalfPi));
    verdict.dihedral_gap_mod_quarter = std::min(r, kHalfPi - r);
    detail << "red pair separation " << verdict.red_pair_separation
           << (verdict.antipodal ? " (antipodal)" : " (NOT antipodal)")
           << "; dihedrals differ from a multiple of pi/2 by "
           << verdict.dihedral_gap_mod_quarter << " (reported, not asserted)";
  } else if (verdict.red_count == 4) {
    // '+' shape: some pairing into two antipodal pairs, with points from
    // different pairs a quarter circle apart.
    static const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& pr : pairings) {
      const Vec3& a = link.points[verdict.red_positions[pr[0]]];
      const Vec3& b = link.points[verdict.red_positions[pr[1]]];
      const Vec3& c = link.points[verdict.red_positions[pr[2]]];
      const Vec3& d = link.points[verdict.red_positions[pr[3]]];
      const bool anti = std::abs(separation(a, b) - M_PI) <= loose &&
                        std::abs(separation(c, d) - M_PI) <= loose;
      const bool cross = std::abs(separation(a, c) - kHalfPi) <= loose &&
                         std::abs(separation(a, d) - kHalfPi) <= loose &&
                         std::abs(separation(b, c) - kHalfPi) <= loose &&
                         std::abs(separation(b, d) - kHalfPi) <= loose;
      if (anti && cross) {
        verdict.plus_shape = true;
        break;
      }
    }
    detail << (verdict.plus_shape ? "red points form a '+'"
                                  : "red points do NOT form a '+'");
  } else {
    detail << "red count " << verdict.red_count << " imposes no constraint";
  }
  verdict.detail = detail.str();
  return verdict;
}

bool link_is_simple(const std::vector<Vec3>& points) {
  const std::size_t n = points.size();
  if (n < 3) return false;
  constexpr double kDuplicateSep = 1e-6;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (separation(points[i], points[j]) < kDuplicateSep) return false;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Vec3 &a = points[i], &b = points[(i + 1) % n];
      const Vec3 &c = points[j], &d = points[(j + 1) % n];
      const Vec3 n1 = a.cross(b).normalized();
      const Vec3 n2 = c.cross(d).normalized();
      Vec3 dir = n1.cross(n2);
      if (dir.norm() < 1e-12) {
        // Same great circle: arcs must not overlap.
        if (on_arc(a, b, n1, c) || on_arc(a, b, n1, d) ||
            on_arc(c, d, n2, a) || on_arc(c, d, n2, b))
          return false;
        continue;
      }
      dir.normalize();
      if ((on_arc(a, b, n1, dir) && on_arc(c, d, n2, dir)) ||
          (on_arc(a, b, n1, -dir) && on_arc(c, d, n2, -dir)))
        return false;
    }
  }
  return true;
}

SphericalLink sample_closed_link(int n, Rng& rng, double tol) {
  if (n < 3)
    throw Error(ErrorKind::InvalidArgument,
                "closed links need at least 3 points");
  (void)tol;
  constexpr int kBudget = 65536;
  for (int attempt = 0; attempt < kBudget; ++attempt) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    pts.push_back(rng.unit_sphere());
    for (int i = 1; i <= n - 2; ++i) pts.push_back(rng.on_circle(pts.back()));

    // The last point is a quarter circle from both its neighbors: one of
    // the two intersections of those circles, chosen by coin flip.
    const Vec3 c = pts.back().cross(pts.front());
    const bool branch = rng.coin();
    if (c.norm() < 1e-9) continue;  // closure infeasible (neighbors aligned)
    pts.push_back(c.normalized() * (branch ? 1.0 : -1.0));

    if (!link_is_simple(pts)) continue;

    SphericalLink link;
    link.points = std::move(pts);
    link.angles.resize(n);
    link.separations.resize(n);
    for (int i = 0; i < n; ++i) {
      link.angles[i] = polygon_angle(link.points, i);
      link.separations[i] =
          separation(link.points[i], link.points[(i + 1) % n]);
    }
    return link;
  }
  throw Error(ErrorKind::SamplingFailure,
              "no simple closed " + std::to_string(n) +
                  "-link found in " + std::to_string(kBudget) + " attempts");
}

SphericalLink sample_closed_link(int n, std::uint64_t seed, double tol) {
  Rng rng(seed);
  return sample_closed_link(n, rng, tol);
}

}  // namespace rectipoly
