#include "rectipoly/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include <Eigen/Dense>

namespace rectipoly {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

struct FacePlane {
  Vec3 centroid;
  Vec3 normal;   // unit; sign chosen so the loop is counterclockwise
  double diameter;
};

// Best-fit plane through the loop (centroid + smallest covariance
// eigenvector), with the normal signed to make the loop counterclockwise.
FacePlane face_plane(const std::vector<Vec3>& pts) {
  FacePlane fp;
  fp.centroid = Vec3::Zero();
  for (const Vec3& p : pts) fp.centroid += p;
  fp.centroid /= double(pts.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : pts) {
    const Vec3 d = p - fp.centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  fp.normal = eig.eigenvectors().col(0).normalized();

  fp.diameter = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      fp.diameter = std::max(fp.diameter, (pts[i] - pts[j]).norm());

  // Twice the signed area vector; positive along the CCW normal.
  Vec3 area2 = Vec3::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i)
    area2 += pts[i].cross(pts[(i + 1) % pts.size()]);
  if (area2.dot(fp.normal) < 0) fp.normal = -fp.normal;
  return fp;
}

// Projection of the loop into the plane's 2D frame.
std::vector<Vec2> project_loop(const std::vector<Vec3>& pts,
                               const FacePlane& fp) {
  Vec3 e0 = pts[1] - pts[0];
  e0 -= fp.normal * fp.normal.dot(e0);
  if (e0.norm() == 0) e0 = Vec3(1, 0, 0);  // degenerate; caught by area test
  e0.normalize();
  const Vec3 e1 = fp.normal.cross(e0);
  std::vector<Vec2> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - pts[0];
    out[i] = Vec2(d.dot(e0), d.dot(e1));
  }
  return out;
}

double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Whether segments [a,b] and [c,d] intersect anywhere (including touching),
// with an absolute slop eps on the orientation tests.
bool segments_meet(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                   double eps) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  auto on_segment = [eps](const Vec2& p, const Vec2& q, const Vec2& r) {
    if (std::abs(cross2(q - p, r - p)) > eps) return false;
    const double t = (r - p).dot(q - p);
    return t > -eps && t < (q - p).squaredNorm() + eps;
  };
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
         on_segment(c, d, b);
}

void validate_face(const std::vector<Vec3>& vertices,
                   const std::vector<Index>& loop, Index face, double tol) {
  const std::string where = "face " + std::to_string(face);
  if (loop.size() < 3)
    fail(ErrorKind::DegenerateFace, where + ": fewer than 3 vertices");
  std::set<Index> seen;
  for (Index v : loop) {
    if (v < 0 || v >= Index(vertices.size()))
      fail(ErrorKind::DegenerateFace,
           where + ": vertex index " + std::to_string(v) + " out of range");
    if (!seen.insert(v).second)
      fail(ErrorKind::DegenerateFace,
           where + ": repeated vertex index " + std::to_string(v));
  }

  std::vector<Vec3> pts(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) pts[i] = vertices[loop[i]];
  const FacePlane fp = face_plane(pts);
  if (fp.diameter == 0)
    fail(ErrorKind::DegenerateFace, where + ": zero diameter");

  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).norm() <= tol * fp.diameter)
        fail(ErrorKind::DegenerateFace,
             where + ": coincident vertices in loop");

  double deviation = 0;
  for (const Vec3& p : pts)
    deviation = std::max(deviation, std::abs(fp.normal.dot(p - fp.centroid)));
  if (deviation > tol * fp.diameter)
    fail(ErrorKind::NonPlanarFace,
         where + ": deviation " + std::to_string(deviation) +
             " exceeds tolerance " + std::to_string(tol * fp.diameter));

  const std::vector<Vec2> flat = project_loop(pts, fp);
  double area2 = 0;
  for (std::size_t i = 0; i < flat.size(); ++i)
    area2 += cross2(flat[i], flat[(i + 1) % flat.size()]);
  const double min_area2 = 2.0 * (tol * fp.diameter) * (tol * fp.diameter);
  if (std::abs(area2) <= min_area2)
    fail(ErrorKind::DegenerateFace, where + ": zero area");

  const std::size_t m = flat.size();
  const double eps = 1e-12 * fp.diameter * fp.diameter;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_meet(flat[i], flat[(i + 1) % m], flat[j],
                        flat[(j + 1) % m], eps))
        fail(ErrorKind::DegenerateFace, where + ": self-intersecting loop");
    }
  }
}

struct Wedge {
  Index in = -1;    // neighbor preceding v in the face loop
  Index out = -1;   // neighbor following v
  Index face = -1;
};

void build_stars(Mesh& mesh) {
  const Index nv = mesh.vertex_count();
  std::vector<std::vector<Wedge>> wedges(nv);
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto& loop = mesh.faces[f];
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Index v = loop[i];
      wedges[v].push_back(
          Wedge{loop[(i + m - 1) % m], loop[(i + 1) % m], f});
    }
  }

  mesh.stars.assign(nv, {});
  for (Index v = 0; v < nv; ++v) {
    auto& ws = wedges[v];
    const std::string where = "vertex " + std::to_string(v);
    if (ws.empty())
      fail(ErrorKind::BadVertexLink, where + ": isolated vertex");

    std::map<Index, std::size_t> by_in;  // in-neighbor -> wedge index
    std::set<Index> outs;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      by_in.emplace(ws[i].in, i);  // duplicates impossible: edge pairing
      outs.insert(ws[i].out);
    }

    // A wedge whose in-edge no other wedge leaves by is a boundary start.
    std::size_t start = ws.size();
    std::size_t start_count = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (!outs.count(ws[i].in)) {
        start = i;
        ++start_count;
      }
    }
    const bool chain = start_count > 0;
    if (chain && (mesh.mode == MeshMode::Closed || start_count > 1))
      fail(ErrorKind::BadVertexLink, where + ": link is not a single cycle");

    std::vector<std::size_t> order;
    std::size_t cur = chain ? start : 0;
    std::set<std::size_t> visited;
    while (visited.insert(cur).second) {
      order.push_back(cur);
      const auto it = by_in.find(ws[cur].out);
      if (it == by_in.end()) break;  // chain end
      cur = it->second;
    }
    if (order.size() != ws.size())
      fail(ErrorKind::BadVertexLink,
           where + ": link splits into multiple cycles or chains");

    auto edge_to = [&mesh, v](Index w) {
      return *mesh.find_edge(v, w);
    };
    auto& star = mesh.stars[v];
    for (std::size_t i : order)
      star.push_back(StarEntry{edge_to(ws[i].in), ws[i].in, ws[i].face});
    if (chain) {
      const Index last_out = ws[order.back()].out;
      star.push_back(StarEntry{edge_to(last_out), last_out, -1});
    }
  }
}

void check_face_pair_contacts(const Mesh& mesh) {
  std::vector<std::vector<Index>> faces_of(mesh.vertex_count());
  for (Index f = 0; f < mesh.face_count(); ++f)
    for (Index v : mesh.faces[f]) faces_of[v].push_back(f);

  std::map<std::pair<Index, Index>, std::vector<Index>> shared;
  for (Index v = 0; v < mesh.vertex_count(); ++v) {
    auto fs = faces_of[v];
    std::sort(fs.begin(), fs.end());
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        shared[{fs[i], fs[j]}].push_back(v);
  }

  for (const auto& [pair, verts] : shared) {
    if (verts.size() < 2) continue;
    const std::string where = "faces " + std::to_string(pair.first) + " and " +
                              std::to_string(pair.second);
    if (verts.size() > 2)
      fail(ErrorKind::NonManifoldEdge,
           where + ": share " + std::to_string(verts.size()) + " vertices");
    const auto e = mesh.find_edge(verts[0], verts[1]);
    const bool full_edge =
        e && ((mesh.edges[*e].face_fwd == pair.first &&
               mesh.edges[*e].face_bwd == pair.second) ||
              (mesh.edges[*e].face_fwd == pair.second &&
               mesh.edges[*e].face_bwd == pair.first));
    if (!full_edge)
      fail(ErrorKind::NonManifoldEdge,
           where + ": share two vertices but no common edge");
  }
}

}  // namespace

std::optional<Index> Mesh::find_edge(Index u, Index v) const {
  const Index a = std::min(u, v), b = std::max(u, v);
  auto it = std::lower_bound(
      edges.begin(), edges.end(), std::make_pair(a, b),
      [](const Edge& e, const std::pair<Index, Index>& key) {
        return std::make_pair(e.a, e.b) < key;
      });
  if (it == edges.end() || it->a != a || it->b != b) return std::nullopt;
  return Index(it - edges.begin());
}

Vec3 Mesh::face_normal(Index face) const {
  const auto& loop = faces[face];
  Vec3 area2 = Vec3::Zero();
  for (std::size_t i = 0; i < loop.size(); ++i)
    area2 += vertices[loop[i]].cross(vertices[loop[(i + 1) % loop.size()]]);
  return area2.normalized();
}

Mesh build_mesh(std::vector<Vec3> vertices,
                std::vector<std::vector<Index>> faces, MeshMode mode,
                double tol) {
  if (faces.empty())
    fail(ErrorKind::DegenerateFace, "mesh has no faces");
  for (const Vec3& p : vertices)
    if (!p.allFinite())
      fail(ErrorKind::DegenerateFace, "non-finite vertex coordinate");

  for (Index f = 0; f < Index(faces.size()); ++f)
    validate_face(vertices, faces[f], f, tol);

  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces = std::move(faces);
  mesh.mode = mode;

  std::map<std::pair<Index, Index>, Edge> table;
  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto& loop = mesh.faces[f];
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Index u = loop[i], v = loop[(i + 1) % m];
      const std::pair<Index, Index> key{std::min(u, v), std::max(u, v)};
      Edge& e = table[key];
      e.a = key.first;
      e.b = key.second;
      Index& slot = (u < v) ? e.face_fwd : e.face_bwd;
      if (slot != -1)
        fail(ErrorKind::NonManifoldEdge,
             "edge (" + std::to_string(u) + "," + std::to_string(v) +
                 ") traversed twice in the same direction (inconsistent "
                 "orientation or more than two faces)");
      slot = f;
    }
  }
  mesh.edges.reserve(table.size());
  for (const auto& [key, e] : table) {
    if (mode == MeshMode::Closed && (e.face_fwd == -1 || e.face_bwd == -1))
      fail(ErrorKind::NonManifoldEdge,
           "boundary edge (" + std::to_string(key.first) + "," +
               std::to_string(key.second) + ") in a closed mesh");
    mesh.edges.push_back(e);
  }

  check_face_pair_contacts(mesh);
  build_stars(mesh);
  return mesh;
}

Topology topology(const Mesh& mesh) {
  if (mesh.mode != MeshMode::Closed)
    fail(ErrorKind::OpenMesh, "topology requires a closed mesh");
  Topology t;
  t.vertex_count = mesh.vertex_count();
  t.edge_count = mesh.edge_count();
  t.face_count = mesh.face_count();
  t.euler_characteristic = int(t.vertex_count) - int(t.edge_count) +
                           int(t.face_count);
  t.genus = (2 - t.euler_characteristic) / 2;
  t.closed = true;
  return t;
}

double signed_volume(const Mesh& mesh) {
  if (mesh.mode != MeshMode::Closed)
    fail(ErrorKind::OpenMesh, "signed_volume requires a closed mesh");
  double vol = 0;
  for (const auto& loop : mesh.faces) {
    const Vec3& p0 = mesh.vertices[loop[0]];
    for (std::size_t i = 1; i + 1 < loop.size(); ++i)
      vol += p0.dot(mesh.vertices[loop[i]].cross(mesh.vertices[loop[i + 1]]));
  }
  return vol / 6.0;
}

std::vector<StarEntry> vertex_star(const Mesh& mesh, Index v) {
  if (v < 0 || v >= mesh.vertex_count())
    fail(ErrorKind::InvalidArgument,
         "vertex index " + std::to_string(v) + " out of range");
  return mesh.stars[v];
}

}  // namespace rectipoly
