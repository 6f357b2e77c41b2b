#pragma once

#include <cstdint>
#include <string>

#include "rectipoly/mesh.hpp"
#include "rectipoly/spherical.hpp"

namespace rectipoly {

/// Axis-aligned cube of side a with one corner at the origin.
Mesh make_cube(double a = 1.0);

/// Rectangular frame (a box with a centered square hole through top and
/// bottom): outer footprint outer x outer, hole hole x hole, height height.
/// Requires 0 < hole < outer with outer - hole even (centered hole) so all
/// coordinates are integers. The top and bottom annuli are partitioned
/// pinwheel-fashion into four rectangles each (five-vertex loops whose fifth
/// vertex is straight), and the outer walls are split at the induced
/// boundary points, so every edge is shared by exactly two faces. Genus 1,
/// every dihedral in {pi/2, pi, 3*pi/2}.
Mesh make_frame_torus(int outer = 3, int hole = 1, int height = 1);

/// The genus-7 polyhedron with octahedral structure: six unit squares (one
/// per axis direction at distance h = 1/2 + L/sqrt(2), apex displaced 1/2
/// inward from each square center) joined by twelve prisms, one per
/// octahedron edge, each contributing one L x 1 face and two L x sqrt(3)/2
/// faces. All 42 faces are rectangles; no dihedral is a multiple of pi/2.
/// Requires L > sqrt(2). Self-checks (counts, closed-manifold validation,
/// rectangle oracle, positive volume) throw ConstructionSelfCheck.
Mesh make_octopus(double L = 3.0);

/// The octopus with each square extruded outward into a unit cube missing
/// its base: same genus, now with some rectilinear dihedrals but still
/// nonorthogonal.
Mesh make_octopus_cubes(double L = 3.0);

/// A vertex star realizing a prescribed red/green link pattern: solves for
/// a closed spherical link whose angle colors match `pattern` (a cyclic
/// string over {r, g}, length >= 3, matched up to rotation) using the seeded
/// closure sampler, then realizes it as an open fan of edge_length squares
/// around a central vertex (vertex 0 of the returned mesh). Throws
/// UnrealizablePattern after 1000 solver attempts — expected for patterns
/// with exactly one or three r's, which the local lemmas forbid.
struct StarGadget {
  Mesh mesh;           // open mesh; the star vertex is index 0
  SphericalLink link;  // the solved link (matches spherical_link(mesh, 0))
  Index pattern_offset = 0;  // rotation at which the pattern matched
};

StarGadget make_star_gadget(const std::string& pattern, std::uint64_t seed,
                            double edge_length = 1.0,
                            double tol = kDefaultTol);

}  // namespace rectipoly
