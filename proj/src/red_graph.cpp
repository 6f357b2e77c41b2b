#include "rectipoly/red_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "rectipoly/spherical.hpp"

namespace rectipoly {

namespace {

Index other_end(const Edge& e, Index v) { return e.a == v ? e.b : e.a; }

struct ChainWalk {
  Index end_node_vertex = -1;
  std::vector<Index> edges;
  std::vector<Index> via;
};

// Follows red edges from `start_vertex` along `first_edge`, through
// red-degree-2 vertices (checking each is a straight joint), until a vertex
// that is a node (red degree != 2).
ChainWalk walk_chain(const Mesh& mesh, const std::vector<EdgeColor>& colors,
                     const std::vector<Index>& red_degree, Index start_vertex,
                     Index first_edge, double collinear_tol) {
  ChainWalk walk;
  Index cur_v = start_vertex;
  Index cur_e = first_edge;
  for (;;) {
    walk.edges.push_back(cur_e);
    const Index next_v = other_end(mesh.edges[cur_e], cur_v);
    if (red_degree[next_v] != 2) {
      walk.end_node_vertex = next_v;
      return walk;
    }
    // Find the other red edge at next_v and check the joint is straight.
    Index next_e = -1;
    for (const StarEntry& entry : mesh.stars[next_v]) {
      if (entry.edge != cur_e && entry.edge >= 0 &&
          colors[entry.edge] == EdgeColor::Red) {
        next_e = entry.edge;
        break;
      }
    }
    const Index far_v = other_end(mesh.edges[next_e], next_v);
    const double joint = separation(mesh.vertices[cur_v] - mesh.vertices[next_v],
                                    mesh.vertices[far_v] - mesh.vertices[next_v]);
    if (std::abs(joint - M_PI) > collinear_tol)
      throw Error(ErrorKind::CollinearityViolation,
                  "red edges at degree-2 vertex " + std::to_string(next_v) +
                      " deviate from collinear by " +
                      std::to_string(std::abs(joint - M_PI)) + " rad");
    walk.via.push_back(next_v);
    cur_v = next_v;
    cur_e = next_e;
  }
}

}  // namespace

RedGraph build_red_graph(const Mesh& mesh, const EdgeClassification& cls,
                         double collinear_tol) {
  RedGraph rg;
  std::vector<Index> red_degree(mesh.vertex_count(), 0);
  for (Index e : cls.red_edges) {
    ++red_degree[mesh.edges[e].a];
    ++red_degree[mesh.edges[e].b];
  }

  std::vector<Index> node_of_vertex(mesh.vertex_count(), -1);
  for (Index v = 0; v < mesh.vertex_count(); ++v) {
    if (red_degree[v] != 0 && red_degree[v] != 2) {
      node_of_vertex[v] = Index(rg.nodes.size());
      rg.nodes.push_back(RedGraphNode{v, {}});
    }
  }

  std::vector<bool> edge_done(mesh.edge_count(), false);
  std::map<std::pair<Index, Index>, DirectedArc> end_by_node_edge;

  for (const RedGraphNode& node : rg.nodes) {
    for (const StarEntry& entry : mesh.stars[node.vertex]) {
      if (entry.face == -1 && entry.edge == -1) continue;
      if (cls.colors[entry.edge] != EdgeColor::Red || edge_done[entry.edge])
        continue;
      ChainWalk walk = walk_chain(mesh, cls.colors, red_degree, node.vertex,
                                  entry.edge, collinear_tol);
      for (Index e : walk.edges) edge_done[e] = true;
      const Index arc = Index(rg.arcs.size());
      RedArc ra;
      ra.node_a = node_of_vertex[node.vertex];
      ra.node_b = node_of_vertex[walk.end_node_vertex];
      ra.mesh_edges = std::move(walk.edges);
      ra.via_vertices = std::move(walk.via);
      end_by_node_edge[{ra.node_a, ra.mesh_edges.front()}] =
          DirectedArc{arc, 0};
      end_by_node_edge[{ra.node_b, ra.mesh_edges.back()}] =
          DirectedArc{arc, 1};
      rg.arcs.push_back(std::move(ra));
    }
  }

  for (Index e : cls.red_edges)
    if (!edge_done[e])
      throw Error(ErrorKind::CollinearityViolation,
                  "red edge " + std::to_string(e) +
                      " lies on a closed chain of red-degree-2 vertices, "
                      "which straight joints cannot form");

  for (Index ni = 0; ni < Index(rg.nodes.size()); ++ni) {
    RedGraphNode& node = rg.nodes[ni];
    for (const StarEntry& entry : mesh.stars[node.vertex]) {
      if (cls.colors[entry.edge] != EdgeColor::Red) continue;
      const auto it = end_by_node_edge.find({ni, entry.edge});
      if (it != end_by_node_edge.end()) node.rotation.push_back(it->second);
    }
  }

  // Components via union-find over nodes.
  std::vector<Index> up(rg.nodes.size());
  std::iota(up.begin(), up.end(), 0);
  auto find = [&up](Index x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  };
  for (const RedArc& arc : rg.arcs) up[find(arc.node_a)] = find(arc.node_b);

  rg.component_of_node.assign(rg.nodes.size(), -1);
  std::map<Index, Index> component_id;
  for (Index ni = 0; ni < Index(rg.nodes.size()); ++ni) {
    const Index root = find(ni);
    auto [it, fresh] = component_id.emplace(root, Index(component_id.size()));
    (void)fresh;
    rg.component_of_node[ni] = it->second;
  }
  rg.component_count = Index(component_id.size());
  return rg;
}

std::vector<FacialWalk> facial_walks(const RedGraph& rg) {
  // Position of each leaving arc end in its node's rotation.
  std::vector<std::map<std::pair<Index, int>, std::size_t>> slot(
      rg.nodes.size());
  for (std::size_t ni = 0; ni < rg.nodes.size(); ++ni)
    for (std::size_t s = 0; s < rg.nodes[ni].rotation.size(); ++s) {
      const DirectedArc& da = rg.nodes[ni].rotation[s];
      slot[ni][{da.arc, da.dir}] = s;
    }

  auto head_node = [&rg](const DirectedArc& da) {
    return da.dir == 0 ? rg.arcs[da.arc].node_b : rg.arcs[da.arc].node_a;
  };

  std::vector<FacialWalk> walks;
  std::vector<std::array<bool, 2>> used(rg.arcs.size(), {false, false});
  for (Index a = 0; a < Index(rg.arcs.size()); ++a) {
    for (int dir = 0; dir < 2; ++dir) {
      if (used[a][dir]) continue;
      FacialWalk walk;
      DirectedArc cur{a, dir};
      do {
        used[cur.arc][cur.dir] = true;
        walk.steps.push_back(cur);
        const Index h = head_node(cur);
        const auto& rot = rg.nodes[h].rotation;
        const std::size_t pos = slot[h].at({cur.arc, 1 - cur.dir});
        cur = rot[(pos + 1) % rot.size()];
      } while (!(cur.arc == a && cur.dir == dir));
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

EulerBoundResult euler_bound(std::int64_t face_count, Rational average_degree,
                             std::int64_t min_walk_length, std::int64_t chi) {
  EulerBoundResult r;
  const Rational F(face_count), k(min_walk_length), x(chi);
  r.lhs = F * (k - average_degree * (k - Rational(2)) / Rational(2));
  r.rhs = average_degree * x;
  r.slack = r.lhs - r.rhs;
  r.holds = r.slack >= Rational(0);
  return r;
}

std::vector<ComponentStats> red_component_stats(const RedGraph& rg,
                                                int host_chi) {
  std::vector<ComponentStats> stats(rg.component_count);
  for (Index ni = 0; ni < Index(rg.nodes.size()); ++ni) {
    ComponentStats& cs = stats[rg.component_of_node[ni]];
    cs.node_vertices.push_back(rg.nodes[ni].vertex);
    ++cs.node_count;
    ++cs.degree_histogram[Index(rg.nodes[ni].rotation.size())];
  }
  for (const RedArc& arc : rg.arcs) {
    ComponentStats& cs = stats[rg.component_of_node[arc.node_a]];
    ++cs.arc_count;
    cs.mesh_edge_count += Index(arc.mesh_edges.size());
  }
  for (const FacialWalk& walk : facial_walks(rg)) {
    const Index comp = rg.component_of_node[rg.arcs[walk.steps[0].arc].node_a];
    ComponentStats& cs = stats[comp];
    ++cs.walk_length_histogram[Index(walk.steps.size())];
    ++cs.walk_count;
  }
  for (ComponentStats& cs : stats) {
    cs.average_degree = Rational(2 * cs.arc_count, cs.node_count);
    cs.min_walk_length = cs.walk_length_histogram.begin()->first;
    cs.bound = euler_bound(cs.walk_count, cs.average_degree,
                           cs.min_walk_length, host_chi);
  }
  return stats;
}

AuditReport g01_audit(const Mesh& mesh, double tol) {
  return g01_audit(mesh, tol, tol);
}

AuditReport g01_audit(const Mesh& mesh, double rect_tol, double color_tol) {
  const RectangleVerdict rect = rectangle_check(mesh, rect_tol);
  if (!rect.all_rectangles) {
    std::string msg = "faces are not all rectangles:";
    for (std::size_t i = 0; i < rect.offenders.size() && i < 8; ++i)
      msg += " " + std::to_string(rect.offenders[i]);
    throw Error(ErrorKind::NotRectangleFaced, msg);
  }

  const Topology topo = topology(mesh);
  const EdgeClassification cls = classify_edges(mesh, color_tol);
  const RedGraph rg = build_red_graph(mesh, cls);

  AuditReport report;
  report.genus = topo.genus;
  report.red_edge_count = cls.red_count;
  report.components = red_component_stats(rg, topo.euler_characteristic);

  report.min_red_degree = 0;
  report.degree_floor_ok = true;
  for (const RedGraphNode& node : rg.nodes) {
    const Index deg = Index(node.rotation.size());
    if (report.min_red_degree == 0 || deg < report.min_red_degree)
      report.min_red_degree = deg;
  }
  if (!rg.nodes.empty() && report.min_red_degree < 4)
    report.degree_floor_ok = false;

  if (cls.red_count == 0) {
    report.verdict = AuditVerdict::Consistent;
  } else if (report.genus >= 2) {
    report.verdict = AuditVerdict::NoConstraint;
  } else {
    report.verdict = AuditVerdict::Inconsistent;
    report.offending_edges = cls.red_edges;
    for (Index e : cls.red_edges) report.deviations.push_back(cls.deviations[e]);
  }
  return report;
}

}  // namespace rectipoly
