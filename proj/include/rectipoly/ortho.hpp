#pragma once

#include <vector>

#include "rectipoly/mesh.hpp"

namespace rectipoly {

/// Interior dihedral angle at `edge`, measured inside the solid, in
/// (0, 2*pi): pi/2 for a cube edge, pi for coplanar faces, values above pi
/// for reflex edges. Requires both incident faces (Closed mesh or interior
/// edge of an Open one).
double dihedral_angle(const Mesh& mesh, Index edge);

/// Reflex-insensitive representative min(theta, 2*pi - theta) in (0, pi].
double folded_dihedral(double theta);

/// Green = dihedral within tol of a multiple of pi/2 (pi/2, pi or 3*pi/2);
/// Red = everything else. Red edges are what obstructs orthogonality.
enum class EdgeColor { Green, Red };

struct EdgeClassification {
  std::vector<double> angles;       // interior dihedral per edge, (0, 2*pi)
  std::vector<double> folded;       // folded_dihedral(angles[e])
  std::vector<int> nearest_k;       // k minimizing |angle - k*pi/2|
  std::vector<double> deviations;   // |angle - nearest_k*pi/2|
  std::vector<EdgeColor> colors;    // per edge
  std::vector<Index> red_edges;     // indices with colors[e] == Red
  Index red_count = 0;
  Index green_count = 0;
};

EdgeClassification classify_edges(const Mesh& mesh, double tol = kDefaultTol);

/// One bucket of congruent rectangle faces, sides sorted side_a <= side_b.
struct RectangleBucket {
  double side_a = 0;
  double side_b = 0;
  Index count = 0;
};

struct FaceRectangleInfo {
  Index face = -1;
  bool is_rectangle = false;
  double side_a = 0;          // valid when is_rectangle
  double side_b = 0;
  Index corner_count = 0;     // vertices left after straight-angle collapse
  double max_angle_deviation = 0;  // max |corner angle - pi/2|
};

struct RectangleVerdict {
  bool all_rectangles = false;
  std::vector<FaceRectangleInfo> faces;
  std::vector<RectangleBucket> inventory;  // congruence classes, sorted
  std::vector<Index> offenders;            // faces with is_rectangle == false
};

/// A face counts as a rectangle when, after collapsing straight vertices
/// (interior angle within tol of pi — such vertices are corners of
/// neighboring faces, not of this one), exactly four corners remain, all
/// four angles are right within tol, and opposite sides have equal length
/// within tol * diameter.
RectangleVerdict rectangle_check(const Mesh& mesh, double tol = kDefaultTol);

/// Pass iff every edge is Green. On Fail, lists the red edges.
struct OrthogonalityCertificate {
  bool pass = false;
  Index red_edge_count = 0;
  std::vector<Index> red_edges;
};

OrthogonalityCertificate orthogonality_certificate(const Mesh& mesh,
                                                   double tol = kDefaultTol);

}  // namespace rectipoly
