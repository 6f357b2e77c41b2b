#include "rectipoly/unfold.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "rectipoly/ortho.hpp"

namespace rectipoly {

namespace {

double cross2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

// Planar coordinates of a face, parallel to its loop, counterclockwise.
std::vector<Vec2> face_template(const Mesh& mesh, Index f) {
  const auto& loop = mesh.faces[f];
  const Vec3 n = mesh.face_normal(f);
  const Vec3 origin = mesh.vertices[loop[0]];
  Vec3 e0 = mesh.vertices[loop[1]] - origin;
  e0 -= e0.dot(n) * n;
  e0.normalize();
  const Vec3 e1 = n.cross(e0);
  std::vector<Vec2> flat;
  flat.reserve(loop.size());
  for (Index v : loop) {
    const Vec3 d = mesh.vertices[v] - origin;
    flat.emplace_back(d.dot(e0), d.dot(e1));
  }
  return flat;
}

// Slot of the directed edge u -> v in the loop, or -1.
Index directed_slot(const std::vector<Index>& loop, Index u, Index v) {
  const int m = int(loop.size());
  for (int s = 0; s < m; ++s)
    if (loop[s] == u && loop[(s + 1) % m] == v) return s;
  return -1;
}

struct Bbox {
  Vec2 lo{std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec2 hi{std::numeric_limits<double>::lowest(),
          std::numeric_limits<double>::lowest()};
  void add(const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Vec2 center() const { return 0.5 * (lo + hi); }
  double diagonal() const { return (hi - lo).norm(); }
  bool near(const Bbox& o, double pad) const {
    return (lo - o.hi).maxCoeff() <= pad && (o.lo - hi).maxCoeff() <= pad;
  }
};

}  // namespace

Net unfold(const Mesh& mesh, UnfoldStrategy strategy, Index root_face) {
  if (mesh.mode != MeshMode::Closed)
    throw Error(ErrorKind::OpenMesh, "unfold requires a closed mesh");
  const Index F = mesh.face_count();
  const Index E = mesh.edge_count();
  if (root_face < 0 || root_face >= F)
    throw Error(ErrorKind::InvalidArgument,
                "root face " + std::to_string(root_face) + " out of range");

  std::vector<std::vector<Vec2>> templates(F);
  for (Index f = 0; f < F; ++f) templates[f] = face_template(mesh, f);

  // Per-face, per-slot edge ids and the two incidences of every edge.
  std::vector<std::vector<Index>> slot_edge(F);
  std::vector<std::array<EdgeUse, 2>> edge_uses(E);
  for (Index f = 0; f < F; ++f) {
    const auto& loop = mesh.faces[f];
    const int m = int(loop.size());
    slot_edge[f].resize(m);
    for (int s = 0; s < m; ++s) {
      const Index u = loop[s], v = loop[(s + 1) % m];
      const Index e = *mesh.find_edge(u, v);
      slot_edge[f][s] = e;
      edge_uses[e][mesh.edges[e].a == u ? 0 : 1] = EdgeUse{f, Index(s)};
    }
  }

  Net net;
  net.root = root_face;
  net.panels.assign(F, {});
  net.parent.assign(F, -1);
  net.parent_edge.assign(F, -1);
  net.parent_slot.assign(F, -1);
  net.child_slot.assign(F, -1);
  net.edge_uses = edge_uses;

  std::vector<bool> placed(F, false);
  net.panels[root_face] = templates[root_face];
  placed[root_face] = true;
  net.order.push_back(root_face);

  // Rigid placement of the child template so that it traverses the shared
  // edge opposite to the parent panel's traversal.
  auto place_child = [&](Index f, int s, Index g) {
    const auto& floop = mesh.faces[f];
    const auto& gloop = mesh.faces[g];
    const Index u = floop[s], v = floop[(s + 1) % floop.size()];
    const Index sg = directed_slot(gloop, v, u);
    const Vec2 qu = net.panels[f][s];
    const Vec2 qv = net.panels[f][(s + 1) % floop.size()];
    const Vec2 rv = templates[g][sg];
    const Vec2 ru = templates[g][(sg + 1) % gloop.size()];
    const Vec2 dq = qu - qv, dr = ru - rv;
    const double phi =
        std::atan2(dq.y(), dq.x()) - std::atan2(dr.y(), dr.x());
    const double c = std::cos(phi), sn = std::sin(phi);
    std::vector<Vec2> panel;
    panel.reserve(gloop.size());
    for (const Vec2& r : templates[g]) {
      const Vec2 d = r - rv;
      panel.emplace_back(qv.x() + c * d.x() - sn * d.y(),
                         qv.y() + sn * d.x() + c * d.y());
    }
    net.panels[g] = std::move(panel);
    net.parent[g] = f;
    net.parent_edge[g] = slot_edge[f][s];
    net.parent_slot[g] = s;
    net.child_slot[g] = sg;
    placed[g] = true;
    net.order.push_back(g);
  };

  auto neighbor_of = [&](Index f, int s) {
    const Edge& e = mesh.edges[slot_edge[f][s]];
    return e.face_fwd == f ? e.face_bwd : e.face_fwd;
  };

  if (strategy == UnfoldStrategy::BreadthFirst) {
    std::deque<Index> queue{root_face};
    while (!queue.empty()) {
      const Index f = queue.front();
      queue.pop_front();
      for (int s = 0; s < int(mesh.faces[f].size()); ++s) {
        const Index g = neighbor_of(f, s);
        if (placed[g]) continue;
        place_child(f, s, g);
        queue.push_back(g);
      }
    }
  } else if (strategy == UnfoldStrategy::DepthFirst) {
    std::function<void(Index)> visit = [&](Index f) {
      for (int s = 0; s < int(mesh.faces[f].size()); ++s) {
        const Index g = neighbor_of(f, s);
        if (placed[g]) continue;
        place_child(f, s, g);
        visit(g);
      }
    };
    visit(root_face);
  } else {
    while (Index(net.order.size()) < F) {
      Bbox box;
      for (Index f : net.order)
        for (const Vec2& p : net.panels[f]) box.add(p);
      const Vec2 center = box.center();

      double best_score = -1.0;
      Index best_f = -1, best_g = -1;
      int best_s = -1;
      for (Index f : net.order) {
        for (int s = 0; s < int(mesh.faces[f].size()); ++s) {
          const Index g = neighbor_of(f, s);
          if (placed[g]) continue;
          // Tentative centroid of the child panel without placing it.
          const auto& floop = mesh.faces[f];
          const auto& gloop = mesh.faces[g];
          const Index u = floop[s], v = floop[(s + 1) % floop.size()];
          const Index sg = directed_slot(gloop, v, u);
          const Vec2 qu = net.panels[f][s];
          const Vec2 qv = net.panels[f][(s + 1) % floop.size()];
          const Vec2 rv = templates[g][sg];
          const Vec2 ru = templates[g][(sg + 1) % gloop.size()];
          const Vec2 dq = qu - qv, dr = ru - rv;
          const double phi =
              std::atan2(dq.y(), dq.x()) - std::atan2(dr.y(), dr.x());
          const double c = std::cos(phi), sn = std::sin(phi);
          Vec2 centroid = Vec2::Zero();
          for (const Vec2& r : templates[g]) {
            const Vec2 d = r - rv;
            centroid += Vec2(qv.x() + c * d.x() - sn * d.y(),
                             qv.y() + sn * d.x() + c * d.y());
          }
          centroid /= double(gloop.size());
          const double score = (centroid - center).norm();
          if (score > best_score + 1e-12 ||
              (score > best_score - 1e-12 &&
               (g < best_g || (g == best_g && f < best_f)))) {
            best_score = score;
            best_f = f;
            best_g = g;
            best_s = s;
          }
        }
      }
      place_child(best_f, best_s, best_g);
    }
  }

  for (Index f = 0; f < F; ++f)
    if (f != root_face) net.fold_edges.push_back(net.parent_edge[f]);
  std::sort(net.fold_edges.begin(), net.fold_edges.end());
  std::set<Index> folds(net.fold_edges.begin(), net.fold_edges.end());
  net.cut_label.assign(E, 0);
  int next_label = 1;
  for (Index e = 0; e < E; ++e)
    if (!folds.count(e)) {
      net.cut_edges.push_back(e);
      net.cut_label[e] = next_label++;
    }

  // Cycle rank of the cut subgraph over the mesh vertices.
  std::vector<Index> dsu(mesh.vertex_count());
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<Index(Index)> find = [&](Index x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  std::set<Index> touched;
  for (Index e : net.cut_edges) {
    touched.insert(mesh.edges[e].a);
    touched.insert(mesh.edges[e].b);
    dsu[find(mesh.edges[e].a)] = find(mesh.edges[e].b);
  }
  std::set<Index> roots;
  for (Index v : touched) roots.insert(find(v));
  net.cut_cycle_rank =
      int(net.cut_edges.size()) - int(touched.size()) + int(roots.size());
  return net;
}

// ---- overlap classification ------------------------------------------------

namespace {

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

// Ear clipping; tolerates straight vertices. Input counterclockwise.
std::vector<std::array<Vec2, 3>> triangulate(const std::vector<Vec2>& poly) {
  std::vector<Vec2> pts = poly;
  if (polygon_signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
  double span = 0;
  for (const Vec2& p : pts)
    for (const Vec2& q : pts) span = std::max(span, (p - q).norm());
  const double eps = 1e-12 * span * span;

  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<Vec2, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const Vec2& p = pts[idx[(k + idx.size() - 1) % idx.size()]];
      const Vec2& c = pts[idx[k]];
      const Vec2& n = pts[idx[(k + 1) % idx.size()]];
      const double cr = cross2(c - p, n - c);
      if (cr < -eps) continue;  // reflex
      if (cr <= eps) {          // straight vertex: drop, no area lost
        idx.erase(idx.begin() + k);
        clipped = true;
        break;
      }
      bool empty = true;
      for (std::size_t m = 0; empty && m < idx.size(); ++m) {
        if (m == k || m == (k + 1) % idx.size() ||
            m == (k + idx.size() - 1) % idx.size())
          continue;
        const Vec2& q = pts[idx[m]];
        empty = cross2(c - p, q - p) < eps || cross2(n - c, q - c) < eps ||
                cross2(p - n, q - n) < eps;
      }
      if (!empty) continue;
      tris.push_back({p, c, n});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped) {  // numeric fallback: fan the remainder
      for (std::size_t k = 1; k + 1 < idx.size(); ++k)
        tris.push_back({pts[idx[0]], pts[idx[k]], pts[idx[k + 1]]});
      return tris;
    }
  }
  if (idx.size() == 3) tris.push_back({pts[idx[0]], pts[idx[1]], pts[idx[2]]});
  return tris;
}

// Clips a polygon to the left side of the directed line a -> b.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& subject,
                                  const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const std::size_t m = subject.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& p = subject[i];
    const Vec2& q = subject[(i + 1) % m];
    const double dp = cross2(b - a, p - a);
    const double dq = cross2(b - a, q - a);
    if (dp >= 0) out.push_back(p);
    if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double tri_tri_intersection_area(const std::array<Vec2, 3>& s,
                                 const std::array<Vec2, 3>& c) {
  std::vector<Vec2> poly(s.begin(), s.end());
  for (int i = 0; i < 3 && !poly.empty(); ++i)
    poly = clip_half_plane(poly, c[i], c[(i + 1) % 3]);
  if (poly.size() < 3) return 0;
  return std::abs(polygon_signed_area(poly));
}

double intersection_area(const std::vector<std::array<Vec2, 3>>& ta,
                         const std::vector<std::array<Vec2, 3>>& tb) {
  double area = 0;
  for (const auto& a : ta)
    for (const auto& b : tb) area += tri_tri_intersection_area(a, b);
  return area;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  const double t =
      len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * d)).norm();
}

// Closest points between two segments (Ericson, Real-Time Collision
// Detection 5.1.9). Returns squared distance; s and t give the parameters.
double segment_segment_dist2(const Vec2& p1, const Vec2& q1, const Vec2& p2,
                             const Vec2& q2, double& s, double& t) {
  const Vec2 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  const double tiny = 1e-30;
  if (a <= tiny && e <= tiny) {
    s = t = 0;
    return r.squaredNorm();
  }
  if (a <= tiny) {
    s = 0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= tiny) {
      t = 0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > tiny ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  const Vec2 c1 = p1 + d1 * s, c2 = p2 + d2 * t;
  return (c1 - c2).squaredNorm();
}

struct Contact {
  bool is_segment = false;
  Vec2 x1 = Vec2::Zero();  // point contact: the point; segment: one end
  Vec2 x2 = Vec2::Zero();  // segment contact: other end
};

// All near-zero-distance contacts between the boundaries of two panels.
std::vector<Contact> boundary_contacts(const std::vector<Vec2>& pa,
                                       const std::vector<Vec2>& pb,
                                       double reach) {
  std::vector<Contact> contacts;
  const std::size_t ma = pa.size(), mb = pb.size();
  for (std::size_t i = 0; i < ma; ++i) {
    const Vec2 a0 = pa[i], a1 = pa[(i + 1) % ma];
    for (std::size_t j = 0; j < mb; ++j) {
      const Vec2 b0 = pb[j], b1 = pb[(j + 1) % mb];
      double s, t;
      const double d2 = segment_segment_dist2(a0, a1, b0, b1, s, t);
      if (d2 > reach * reach) continue;
      const Vec2 da = (a1 - a0), db = (b1 - b0);
      const double la = da.norm(), lb = db.norm();
      bool parallel = la > 0 && lb > 0 &&
                      std::abs(cross2(da / la, db / lb)) < 1e-7;
      if (parallel) {
        // Overlap window of b's endpoints along a.
        const Vec2 ua = da / la;
        double t0 = (b0 - a0).dot(ua), t1 = (b1 - a0).dot(ua);
        if (t0 > t1) std::swap(t0, t1);
        const double lo = std::max(0.0, t0), hi = std::min(la, t1);
        if (hi - lo > reach) {
          Contact cseg;
          cseg.is_segment = true;
          cseg.x1 = a0 + lo * ua;
          cseg.x2 = a0 + hi * ua;
          contacts.push_back(cseg);
          continue;
        }
      }
      Contact cpt;
      cpt.x1 = cpt.x2 = 0.5 * ((a0 + s * da) + (b0 + t * db));
      contacts.push_back(cpt);
    }
  }
  return contacts;
}

bool point_strictly_inside(const std::vector<Vec2>& poly, const Vec2& p,
                           double margin) {
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i)
    if (point_segment_distance(p, poly[i], poly[(i + 1) % m]) <= margin)
      return false;
  bool inside = false;  // crossing number
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
      inside = !inside;
  }
  return inside;
}

double interior_angle_2d(const std::vector<Vec2>& poly, std::size_t i) {
  const std::size_t m = poly.size();
  const Vec2 u = poly[(i + 1) % m] - poly[i];
  const Vec2 w = poly[(i + m - 1) % m] - poly[i];
  double ang = std::atan2(cross2(u, w), u.dot(w));
  if (ang <= 0) ang += 2 * M_PI;
  return ang;
}

}  // namespace

OverlapReport overlap_status(const Net& net, double tol) {
  if (net.panels.empty())
    throw Error(ErrorKind::InvalidArgument, "empty net");
  const Index F = Index(net.panels.size());
  std::vector<Bbox> boxes(F);
  Bbox all;
  for (Index f = 0; f < F; ++f) {
    if (net.panels[f].size() < 3)
      throw Error(ErrorKind::InvalidArgument,
                  "net panel " + std::to_string(f) + " is degenerate");
    for (const Vec2& p : net.panels[f]) {
      boxes[f].add(p);
      all.add(p);
    }
  }
  const double scale = all.diagonal();
  const double len = std::max(tol * scale, 1e-14 * scale);

  OverlapReport report;
  std::vector<std::vector<std::array<Vec2, 3>>> tris(F);
  for (Index f = 0; f < F; ++f) tris[f] = triangulate(net.panels[f]);

  // Positive-area pass. The clipped area of panels that share an exact
  // fold segment carries rounding noise of order eps * scale^2, so the
  // (tol * scale)^2 threshold gets a floating-point floor.
  const double area_floor =
      std::max(len * len, 1e-12 * scale * scale);
  for (Index i = 0; i < F; ++i) {
    for (Index j = i + 1; j < F; ++j) {
      if (!boxes[i].near(boxes[j], len)) continue;
      bool bad = intersection_area(tris[i], tris[j]) > area_floor;
      if (!bad)
        for (const Vec2& p : net.panels[i])
          if (point_strictly_inside(net.panels[j], p, len)) bad = true;
      if (!bad)
        for (const Vec2& p : net.panels[j])
          if (point_strictly_inside(net.panels[i], p, len)) bad = true;
      if (bad) {
        report.status = OverlapStatus::Overlapping;
        if (report.witnesses.size() < 32) report.witnesses.emplace_back(i, j);
      }
    }
  }
  if (report.status == OverlapStatus::Overlapping) return report;

  // Zero-area contacts.
  const double reach = 2 * len;
  auto fold_segment = [&](Index child) {
    const auto& panel = net.panels[child];
    const Index s = net.child_slot[child];
    return std::pair<Vec2, Vec2>(panel[s], panel[(s + 1) % panel.size()]);
  };

  // Panels allowed to meet at a point: every panel with a corner there must
  // be reachable through fold edges ending at that point, and the fan of
  // corner angles must stay short of a full turn.
  auto corner_contact_allowed = [&](Index i, Index j, const Vec2& x) {
    std::map<Index, double> corner_angle;
    for (Index f = 0; f < F; ++f) {
      if ((x - boxes[f].lo).minCoeff() < -reach ||
          (boxes[f].hi - x).minCoeff() < -reach)
        continue;
      const auto& panel = net.panels[f];
      for (std::size_t m = 0; m < panel.size(); ++m)
        if ((panel[m] - x).norm() <= reach) {
          corner_angle[f] = interior_angle_2d(panel, m);
          break;
        }
    }
    if (!corner_angle.count(i) || !corner_angle.count(j)) return false;

    // Union panels joined by a fold edge with an endpoint at x.
    std::map<Index, Index> comp;
    for (const auto& [f, angle] : corner_angle) comp[f] = f;
    std::function<Index(Index)> find = [&](Index f) {
      while (comp[f] != f) f = comp[f] = comp[comp[f]];
      return f;
    };
    for (const auto& [f, angle] : corner_angle) {
      const Index p = net.parent[f];
      if (p < 0 || !corner_angle.count(p)) continue;
      const auto [fa, fb] = fold_segment(f);
      if ((fa - x).norm() <= reach || (fb - x).norm() <= reach)
        comp[find(f)] = find(p);
    }
    if (find(i) != find(j)) return false;
    double total = 0;
    for (const auto& [f, angle] : corner_angle)
      if (find(f) == find(i)) total += angle;
    return total < 2 * M_PI - 1e-7;
  };

  for (Index i = 0; i < F; ++i) {
    for (Index j = i + 1; j < F; ++j) {
      if (!boxes[i].near(boxes[j], reach)) continue;
      const auto contacts = boundary_contacts(net.panels[i], net.panels[j], len);
      if (contacts.empty()) continue;

      Index child = -1;
      if (net.parent[i] == j) child = i;
      if (net.parent[j] == i) child = j;

      bool touching = false;
      for (const Contact& c : contacts) {
        if (child >= 0) {
          const auto [fa, fb] = fold_segment(child);
          const bool ok =
              point_segment_distance(c.x1, fa, fb) <= reach &&
              point_segment_distance(c.x2, fa, fb) <= reach;
          if (!ok) touching = true;
        } else if (c.is_segment) {
          touching = true;
        } else if (!corner_contact_allowed(i, j, c.x1)) {
          touching = true;
        }
        if (touching) break;
      }
      if (touching) {
        report.status = OverlapStatus::Touching;
        if (report.witnesses.size() < 32) report.witnesses.emplace_back(i, j);
      }
    }
  }
  return report;
}

// ---- refold ----------------------------------------------------------------

namespace {

// Affine map from panel coordinates into 3-space.
struct PanelFrame {
  Eigen::Matrix<double, 3, 2> L = Eigen::Matrix<double, 3, 2>::Zero();
  Vec3 t = Vec3::Zero();
  Vec3 operator()(const Vec2& p) const { return L * p + t; }
};

}  // namespace

RefoldResult refold(const Net& net, const Mesh& source) {
  const Index F = source.face_count();
  const Index E = source.edge_count();
  if (Index(net.panels.size()) != F || Index(net.edge_uses.size()) != E ||
      net.order.empty() || Index(net.order.size()) != F)
    throw Error(ErrorKind::InvalidArgument,
                "net does not describe this mesh");

  Vec3 lo = source.vertices[0], hi = source.vertices[0];
  for (const Vec3& p : source.vertices) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = (hi - lo).norm();
  const double congruence_tol = 1e-6 * std::max(scale, 1.0);

  // Every panel must be a direct isometric copy of its face.
  for (Index f = 0; f < F; ++f) {
    const auto& loop = source.faces[f];
    const auto& panel = net.panels[f];
    if (panel.size() != loop.size())
      throw Error(ErrorKind::FoldMismatch,
                  "panel " + std::to_string(f) + " has the wrong arity");
    bool ok = polygon_signed_area(panel) > 0;
    for (std::size_t j = 0; ok && j < loop.size(); ++j) {
      const double d0 = (panel[j] - panel[0]).norm();
      const double e0 =
          (source.vertices[loop[j]] - source.vertices[loop[0]]).norm();
      const double d1 = (panel[j] - panel[1 % panel.size()]).norm();
      const double e1 =
          (source.vertices[loop[j]] - source.vertices[loop[1 % loop.size()]])
              .norm();
      ok = std::abs(d0 - e0) <= congruence_tol &&
           std::abs(d1 - e1) <= congruence_tol;
    }
    if (!ok)
      throw Error(ErrorKind::FoldMismatch,
                  "panel " + std::to_string(f) +
                      " is not congruent to its face");
  }

  // Root frame: map the root panel directly onto the root face.
  std::vector<PanelFrame> frame(F);
  {
    const Index r = net.order.front();
    const auto& loop = source.faces[r];
    const auto& panel = net.panels[r];
    const Vec2 p0 = panel[0], p1 = panel[1];
    const Vec2 u2 = (p1 - p0).normalized();
    const Vec2 v2(-u2.y(), u2.x());
    const Vec3 P0 = source.vertices[loop[0]];
    const Vec3 u3 = (source.vertices[loop[1]] - P0).normalized();
    const Vec3 v3 = source.face_normal(r).cross(u3);
    PanelFrame& fr = frame[r];
    fr.L = u3 * u2.transpose() + v3 * v2.transpose();
    fr.t = P0 - fr.L * p0;
  }

  // Fold each child about its tree edge through pi - dihedral.
  for (std::size_t k = 1; k < net.order.size(); ++k) {
    const Index f = net.order[k];
    const Index p = net.parent[f];
    if (p < 0 || net.parent_edge[f] < 0)
      throw Error(ErrorKind::InvalidArgument,
                  "net tree is missing a parent link");
    const auto& ppanel = net.panels[p];
    const Vec2 a2 = ppanel[net.parent_slot[f]];
    const Vec2 b2 = ppanel[(net.parent_slot[f] + 1) % ppanel.size()];
    const Vec3 a3 = frame[p](a2);
    const Vec3 b3 = frame[p](b2);
    const Vec3 axis = (b3 - a3).normalized();
    const double theta = dihedral_angle(source, net.parent_edge[f]);
    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(M_PI - theta, axis).toRotationMatrix();
    frame[f].L = rot * frame[p].L;
    frame[f].t = rot * (frame[p].t - a3) + a3;
  }

  // Both copies of every edge must land together.
  const double glue_tol = 1e-6 * std::max(scale, 1.0);
  for (Index e = 0; e < E; ++e) {
    const EdgeUse& ua = net.edge_uses[e][0];
    const EdgeUse& ub = net.edge_uses[e][1];
    const auto& pa = net.panels[ua.face];
    const auto& pb = net.panels[ub.face];
    const Vec3 a0 = frame[ua.face](pa[ua.slot]);
    const Vec3 a1 = frame[ua.face](pa[(ua.slot + 1) % pa.size()]);
    const Vec3 b0 = frame[ub.face](pb[ub.slot]);
    const Vec3 b1 = frame[ub.face](pb[(ub.slot + 1) % pb.size()]);
    const double err = std::max((a0 - b1).norm(), (a1 - b0).norm());
    if (err > glue_tol)
      throw Error(ErrorKind::FoldMismatch,
                  "edge " + std::to_string(e) +
                      " fails to close after folding (gap " +
                      std::to_string(err) + ")");
  }

  // Average the per-panel images of each vertex.
  std::vector<Vec3> acc(source.vertex_count(), Vec3::Zero());
  std::vector<int> cnt(source.vertex_count(), 0);
  for (Index f = 0; f < F; ++f) {
    const auto& loop = source.faces[f];
    for (std::size_t s = 0; s < loop.size(); ++s) {
      acc[loop[s]] += frame[f](net.panels[f][s]);
      cnt[loop[s]] += 1;
    }
  }
  Eigen::Matrix3Xd rec(3, source.vertex_count());
  Eigen::Matrix3Xd ref(3, source.vertex_count());
  for (Index v = 0; v < source.vertex_count(); ++v) {
    rec.col(v) = acc[v] / double(cnt[v]);
    ref.col(v) = source.vertices[v];
  }

  const Eigen::Matrix4d T = Eigen::umeyama(rec, ref, false);
  std::vector<Vec3> aligned(source.vertex_count());
  double err = 0;
  for (Index v = 0; v < source.vertex_count(); ++v) {
    aligned[v] = (T * rec.col(v).homogeneous()).head<3>();
    err = std::max(err, (aligned[v] - Vec3(ref.col(v))).norm());
  }

  RefoldResult result{build_mesh(aligned, source.faces, source.mode), err};
  return result;
}

// ---- SVG export ------------------------------------------------------------

void export_svg(std::ostream& out, const Net& net,
                double millimeters_per_unit) {
  if (net.panels.empty() || net.order.empty())
    throw Error(ErrorKind::InvalidArgument, "cannot export an empty net");
  if (!(millimeters_per_unit > 0))
    throw Error(ErrorKind::InvalidArgument, "scale must be positive");

  Bbox box;
  for (const auto& panel : net.panels)
    for (const Vec2& p : panel) box.add(p);
  const double mm = millimeters_per_unit;
  const double margin = 5.0;
  const double width = (box.hi - box.lo).x() * mm + 2 * margin;
  const double height = (box.hi - box.lo).y() * mm + 2 * margin;
  auto X = [&](const Vec2& p) { return (p.x() - box.lo.x()) * mm + margin; };
  auto Y = [&](const Vec2& p) { return (box.hi.y() - p.y()) * mm + margin; };

  char buf[256];
  auto line = [&](const Vec2& a, const Vec2& b) {
    std::snprintf(buf, sizeof buf,
                  "    <line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" "
                  "y2=\"%.4f\"/>\n",
                  X(a), Y(a), X(b), Y(b));
    out << buf;
  };

  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.3fmm\" "
                "height=\"%.3fmm\" viewBox=\"0 0 %.3f %.3f\">\n",
                width, height, width, height);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << buf;

  out << "  <g id=\"panels\" fill=\"#f2f2f2\" stroke=\"none\">\n";
  for (std::size_t f = 0; f < net.panels.size(); ++f) {
    out << "    <polygon id=\"panel-" << f << "\" points=\"";
    for (std::size_t s = 0; s < net.panels[f].size(); ++s) {
      const Vec2& p = net.panels[f][s];
      std::snprintf(buf, sizeof buf, "%s%.4f,%.4f", s ? " " : "", X(p), Y(p));
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <g id=\"folds\" stroke=\"#777777\" stroke-width=\"0.3\" "
         "stroke-dasharray=\"1.8 1.2\" fill=\"none\">\n";
  for (Index f : net.order) {
    if (net.parent[f] < 0) continue;
    const auto& panel = net.panels[f];
    const Index s = net.child_slot[f];
    line(panel[s], panel[(s + 1) % panel.size()]);
  }
  out << "  </g>\n";

  out << "  <g id=\"cuts\" stroke=\"#000000\" stroke-width=\"0.4\" "
         "fill=\"none\">\n";
  for (Index e : net.cut_edges)
    for (const EdgeUse& use : net.edge_uses[e]) {
      const auto& panel = net.panels[use.face];
      line(panel[use.slot], panel[(use.slot + 1) % panel.size()]);
    }
  out << "  </g>\n";

  out << "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"3\" "
         "text-anchor=\"middle\" fill=\"#444444\">\n";
  for (Index e : net.cut_edges)
    for (const EdgeUse& use : net.edge_uses[e]) {
      const auto& panel = net.panels[use.face];
      const Vec2 a = panel[use.slot];
      const Vec2 b = panel[(use.slot + 1) % panel.size()];
      Vec2 centroid = Vec2::Zero();
      for (const Vec2& p : panel) centroid += p;
      centroid /= double(panel.size());
      Vec2 pos = 0.5 * (a + b);
      const Vec2 inward = centroid - pos;
      if (inward.norm() > 1e-12) pos += inward.normalized() * (2.5 / mm);
      std::snprintf(buf, sizeof buf,
                    "    <text x=\"%.4f\" y=\"%.4f\">%d</text>\n", X(pos),
                    Y(pos) + 1.0, net.cut_label[e]);
      out << buf;
    }
  out << "  </g>\n</svg>\n";
}

std::string export_svg(const Net& net, double millimeters_per_unit) {
  std::ostringstream out;
  export_svg(out, net, millimeters_per_unit);
  return out.str();
}

}  // namespace rectipoly
