#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rectipoly/ortho.hpp"

namespace rectipoly {

/// One end of an arc leaving a node: the arc index and the direction it is
/// traversed when leaving (0 = along mesh_edges front-to-back, 1 = reversed).
struct DirectedArc {
  Index arc = -1;
  int dir = 0;

  bool operator==(const DirectedArc& o) const {
    return arc == o.arc && dir == o.dir;
  }
};

/// A maximal chain of red mesh edges joining two nodes, merged across
/// red-degree-2 vertices (whose two red edges are collinear).
struct RedArc {
  Index node_a = -1;  // node index at the mesh_edges.front() end
  Index node_b = -1;  // node index at the mesh_edges.back() end
  std::vector<Index> mesh_edges;     // >= 1 mesh edge ids, ordered a -> b
  std::vector<Index> via_vertices;   // interior degree-2 mesh vertices, a -> b
};

struct RedGraphNode {
  Index vertex = -1;  // mesh vertex id
  /// Arc ends leaving this node, in the cyclic order induced by the mesh
  /// vertex star (ordered by each arc's first mesh edge around the vertex).
  std::vector<DirectedArc> rotation;
};

/// The subgraph of red edges with degree-2 chains contracted, carrying the
/// rotation system inherited from the surface (its canonical embedding).
struct RedGraph {
  std::vector<RedGraphNode> nodes;
  std::vector<RedArc> arcs;
  std::vector<Index> component_of_node;  // component id per node, 0-based
  Index component_count = 0;
};

/// Builds the red graph: drop green edges, contract red chains through
/// red-degree-2 vertices (throwing CollinearityViolation if the two edges at
/// such a vertex deviate from collinear by more than collinear_tol, or if a
/// closed chain has no node at all), record rotations from the vertex stars.
/// Returns an empty graph when there are no red edges.
RedGraph build_red_graph(const Mesh& mesh, const EdgeClassification& cls,
                         double collinear_tol = 1e-7);

/// One complete face traversal of the embedding: the sequence of directed
/// arcs obtained by the standard face-tracing rule (successor of the
/// reversed arc in the head node's rotation). Every directed arc appears in
/// exactly one walk; a bridge contributes twice to the same walk.
struct FacialWalk {
  std::vector<DirectedArc> steps;
};

std::vector<FacialWalk> facial_walks(const RedGraph& rg);

/// Exact evaluation of  F * [k - d(k-2)/2] >= d * chi  in rational
/// arithmetic. slack = lhs - rhs; holds iff slack >= 0.
struct EulerBoundResult {
  bool holds = false;
  Rational lhs;
  Rational rhs;
  Rational slack;
};

EulerBoundResult euler_bound(std::int64_t face_count, Rational average_degree,
                             std::int64_t min_walk_length, std::int64_t chi);

/// Per-component statistics of the embedded red graph, the inputs of the
/// Euler bound: V_r, E_r, F_r, average degree d, minimum walk length k,
/// and the bound evaluated against the host surface's chi.
struct ComponentStats {
  std::vector<Index> node_vertices;  // mesh vertex ids of this component
  Index node_count = 0;
  Index arc_count = 0;
  Index mesh_edge_count = 0;  // red mesh edges covered by this component
  std::map<Index, Index> degree_histogram;
  Rational average_degree;  // 2 * arc_count / node_count
  std::map<Index, Index> walk_length_histogram;
  Index min_walk_length = 0;
  Index walk_count = 0;
  EulerBoundResult bound;  // with the host mesh's Euler characteristic
};

std::vector<ComponentStats> red_component_stats(const RedGraph& rg,
                                                int host_chi);

enum class AuditVerdict { Consistent, NoConstraint, Inconsistent };

/// Executable form of the genus-0/1 theorem: a closed rectangle-faced mesh
/// of genus <= 1 must have an empty red graph, so a nonempty one signals
/// numerical misclassification and is reported Inconsistent with the
/// offending edges; genus >= 2 imposes no constraint. Degree floors (no
/// red-degree 1 or 3, minimum 4) and the per-component bound statistics are
/// always attached. Throws NotRectangleFaced when some face fails
/// rectangle_check at rect_tol.
struct AuditReport {
  AuditVerdict verdict = AuditVerdict::Consistent;
  int genus = 0;
  Index red_edge_count = 0;
  Index min_red_degree = 0;     // over all nodes; 0 when no red edges
  bool degree_floor_ok = true;  // no degree-1/3 node, min degree >= 4
  std::vector<ComponentStats> components;
  std::vector<Index> offending_edges;  // red mesh edges when Inconsistent
  std::vector<double> deviations;      // their distances to k*pi/2
};

AuditReport g01_audit(const Mesh& mesh, double tol = kDefaultTol);
AuditReport g01_audit(const Mesh& mesh, double rect_tol, double color_tol);

}  // namespace rectipoly
