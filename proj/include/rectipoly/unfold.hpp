#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "rectipoly/mesh.hpp"

namespace rectipoly {

enum class UnfoldStrategy { BreadthFirst, DepthFirst, SteepestNormal };

/// One incidence of a mesh edge on a face: the edge runs from loop[slot] to
/// loop[slot+1] in that face's loop.
struct EdgeUse {
  Index face = -1;
  Index slot = -1;
};

/// A one-piece planar unfolding: every face placed isometrically as a 2D
/// panel (points parallel to the face loop), connected through a spanning
/// tree of the face-adjacency dual. Tree edges are folds; all other mesh
/// edges are cuts, appearing as two boundary segments that share a gluing
/// label. Self-contained: carries the per-edge incidences it needs, so
/// overlap and SVG export do not consult the source mesh.
struct Net {
  Index root = 0;
  std::vector<std::vector<Vec2>> panels;  // per face id
  std::vector<Index> parent;       // per face: tree parent, -1 for root
  std::vector<Index> parent_edge;  // per face: shared mesh edge, -1 for root
  std::vector<Index> parent_slot;  // slot of that edge in the parent loop
  std::vector<Index> child_slot;   // slot of that edge in this face's loop
  std::vector<Index> order;        // placement order, root first
  std::vector<Index> fold_edges;   // mesh edge ids in the tree (F - 1)
  std::vector<Index> cut_edges;    // mesh edge ids cut open
  std::vector<int> cut_label;      // per mesh edge: 1..K for cuts, 0 folds
  std::vector<std::array<EdgeUse, 2>> edge_uses;  // per mesh edge
  /// Cycle rank E_cut - V + components of the cut subgraph on the mesh
  /// vertices; equals 2*genus for the unfoldings produced here.
  int cut_cycle_rank = 0;
};

/// Unrolls the mesh over a spanning tree of the dual rooted at root_face.
/// BreadthFirst and DepthFirst traverse neighbors in face-loop order;
/// SteepestNormal greedily attaches the frontier face whose tentative panel
/// centroid lands farthest from the current net's bounding-box center.
Net unfold(const Mesh& mesh, UnfoldStrategy strategy = UnfoldStrategy::BreadthFirst,
           Index root_face = 0);

/// Simple: panel interiors pairwise disjoint and boundaries meet only along
/// shared fold segments (point contacts where a flat fan of fold-connected
/// panels closes less than a full turn are part of such meetings).
/// Touching: zero-area contact beyond that. Overlapping: positive
/// intersection area above (tol * scale)^2, scale = net bounding-box
/// diagonal.
enum class OverlapStatus { Simple, Touching, Overlapping };

struct OverlapReport {
  OverlapStatus status = OverlapStatus::Simple;
  std::vector<std::pair<Index, Index>> witnesses;  // offending panel pairs
};

OverlapReport overlap_status(const Net& net, double tol = kDefaultTol);

/// Refolds the net by rotating each panel about its tree fold edge through
/// the source dihedral (fold angle pi - theta), averaging the per-panel
/// vertex images, and rigidly aligning the result to the source. Throws
/// FoldMismatch if a panel is not congruent to its source face or the two
/// copies of a cut edge fail to coincide after folding.
struct RefoldResult {
  Mesh mesh;               // refolded mesh, aligned to the source
  double alignment_error;  // max vertex distance to the source positions
};

RefoldResult refold(const Net& net, const Mesh& source);

/// SVG 1.1 drawing of the net: one group per panel, cut edges solid, fold
/// edges dashed, paired integer gluing labels at cut-edge midpoints.
/// millimeters_per_unit scales model units to mm. Throws InvalidArgument on
/// an empty net.
void export_svg(std::ostream& out, const Net& net,
                double millimeters_per_unit = 20.0);
std::string export_svg(const Net& net, double millimeters_per_unit = 20.0);

}  // namespace rectipoly
