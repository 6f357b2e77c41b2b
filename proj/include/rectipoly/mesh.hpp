#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rectipoly/types.hpp"

namespace rectipoly {

/// Whether a mesh is required to be watertight. Open meshes (boundary edges
/// allowed) exist solely to host star gadgets; every polyhedron construction
/// and every file loaded for analysis is validated as Closed.
enum class MeshMode { Closed, Open };

/// Undirected edge record. `a < b` always; `face_fwd` traverses a->b in its
/// loop, `face_bwd` traverses b->a. For a boundary edge (Open meshes only)
/// `face_bwd == -1`.
struct Edge {
  Index a = -1;
  Index b = -1;
  Index face_fwd = -1;
  Index face_bwd = -1;
};

/// One entry of a vertex star: the directed edge leaving the vertex and the
/// face lying counterclockwise between it and the next entry (as seen from
/// outside the surface). For an interior vertex the entries form a cycle;
/// for a boundary vertex of an Open mesh, a chain whose last entry has
/// `face == -1`.
struct StarEntry {
  Index edge = -1;      // index into Mesh::edges
  Index neighbor = -1;  // far endpoint of that edge
  Index face = -1;      // face between this edge and the next one
};

/// An oriented polygonal surface, all faces planar, every edge shared by
/// exactly two faces with opposite traversal directions (Closed mode).
/// Construct only through build_mesh so the invariants hold.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<Index>> faces;  // outward-oriented vertex loops
  std::vector<Edge> edges;                // sorted by (a, b)
  std::vector<std::vector<StarEntry>> stars;  // per vertex, cyclic order
  MeshMode mode = MeshMode::Closed;

  Index vertex_count() const { return Index(vertices.size()); }
  Index edge_count() const { return Index(edges.size()); }
  Index face_count() const { return Index(faces.size()); }

  /// Index into `edges` for the unordered pair {u, v}, if present.
  std::optional<Index> find_edge(Index u, Index v) const;

  /// Unit normal of the (validated planar) face.
  Vec3 face_normal(Index face) const;
};

struct Topology {
  Index vertex_count = 0;
  Index edge_count = 0;
  Index face_count = 0;
  int euler_characteristic = 0;
  int genus = 0;  // meaningful for Closed meshes: g = (2 - chi) / 2
  bool closed = false;
};

/// Validates and indexes a polygonal surface. Throws Error with kind
/// DegenerateFace, NonPlanarFace, NonManifoldEdge or BadVertexLink, naming
/// the offending face/edge/vertex. Checks, in order: per-face sanity
/// (>= 3 distinct in-range vertices, simple and nondegenerate within its
/// plane), planarity (best-fit plane deviation <= tol * face diameter),
/// edge pairing (each undirected edge traversed exactly once in each
/// direction; boundary edges permitted only in Open mode), no two faces
/// sharing more than one edge's worth of vertices without that edge, and
/// single-cycle (or single-chain) vertex stars.
Mesh build_mesh(std::vector<Vec3> vertices,
                std::vector<std::vector<Index>> faces,
                MeshMode mode = MeshMode::Closed,
                double tol = kDefaultTol);

Topology topology(const Mesh& mesh);

/// Signed volume via the divergence theorem (sum of signed tetrahedra);
/// positive iff face loops are outward-oriented. Closed meshes only.
double signed_volume(const Mesh& mesh);

/// The cyclically ordered star of `vertex` (copy of the precomputed table).
std::vector<StarEntry> vertex_star(const Mesh& mesh, Index vertex);

}  // namespace rectipoly
