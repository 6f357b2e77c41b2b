#pragma once

#include <string>
#include <vector>

#include "rectipoly/mesh.hpp"

namespace rectipoly {

/// The spherical polygon traced by the surface on a small sphere around a
/// vertex: one unit point per incident edge (in star order), one arc per
/// incident face. `angles[i]` is the polygon angle at `points[i]`, which for
/// a mesh link equals the dihedral angle of the i-th star edge.
struct SphericalLink {
  std::vector<Vec3> points;
  std::vector<double> angles;       // radians in (0, 2*pi), one per point
  std::vector<double> separations;  // separation(points[i], points[i+1])
};

/// Spherical distance between unit vectors, in [0, pi]. Computed as
/// atan2(|p x q|, p . q), which is accurate near 0 and pi where the
/// arccos form loses precision.
double separation(const Vec3& p, const Vec3& q);

enum class SeparationClass { Antipodal, Quarter, Other };

/// Antipodal iff |d - pi| <= tol, Quarter iff |d - pi/2| <= tol.
SeparationClass classify_separation(const Vec3& p, const Vec3& q,
                                    double tol = kDefaultTol);

/// Link of an interior vertex. Points are the unit edge directions from v in
/// star order; the arc between consecutive points crosses the face between
/// those edges, so its length is that face's corner angle at v. Throws
/// NonQuarterArc if any such corner angle differs from pi/2 by more than tol
/// (every face must have a right angle at v), and InvalidArgument for a
/// boundary vertex of an open mesh.
SphericalLink spherical_link(const Mesh& mesh, Index v,
                             double tol = kDefaultTol);

/// True iff every polygon angle strictly between positions i and j (walking
/// forward cyclically from i to j) is rectilinear within tol. The endpoints'
/// own angles are not examined.
bool is_orthogonal_path(const SphericalLink& link, Index i, Index j,
                        double tol = kDefaultTol);

enum class LocalStatus { Consistent, LemmaViolation };

/// Outcome of checking one vertex link against the local red-count lemmas:
/// red counts 1 and 3 are impossible; 2 red points must be antipodal; 4 red
/// points must form a '+' (two antipodal pairs, cross pairs quarter-apart).
/// The antipodality/'+' findings are recorded as detail, and the observed
/// relation between the two red dihedrals at a 2-red vertex is reported
/// without being asserted.
struct LocalVerdict {
  LocalStatus status = LocalStatus::Consistent;
  std::string violated_lemma;        // "1-red" or "3-red" when violated
  Index red_count = 0;
  std::vector<Index> red_positions;  // indices into link points
  bool antipodal = false;            // red_count == 2: pair antipodal?
  double red_pair_separation = 0;    // red_count == 2
  double dihedral_gap_mod_quarter = 0;  // red_count == 2: reported only
  bool plus_shape = false;           // red_count == 4: '+' test result
  std::string detail;
};

LocalVerdict local_constraint_check(const SphericalLink& link,
                                    double tol = kDefaultTol);

/// True iff no two arcs of the closed polygon cross (shared endpoints of
/// consecutive arcs excepted) and no two points coincide.
bool link_is_simple(const std::vector<Vec3>& points);

/// Random simple closed spherical polygon with n sides, every side a quarter
/// arc: the first point is uniform on the sphere, the next n-2 are each
/// uniform on the great circle at separation pi/2 from their predecessor,
/// and the last is one of the two intersection points of the quarter-circles
/// around its two neighbors (seeded coin flip picks the branch). Infeasible
/// closures and non-simple polygons are rejected and retried; throws
/// SamplingFailure when the retry budget (65536 attempts) is exhausted; the simple-link acceptance rate falls to about 1/600 by degree 12.
SphericalLink sample_closed_link(int n, Rng& rng, double tol = kDefaultTol);
SphericalLink sample_closed_link(int n, std::uint64_t seed,
                                 double tol = kDefaultTol);

}  // namespace rectipoly
