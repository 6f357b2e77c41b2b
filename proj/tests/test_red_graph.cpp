#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "doctest.h"

#include "rectipoly/constructions.hpp"
#include "rectipoly/mesh.hpp"
#include "rectipoly/red_graph.hpp"
#include "test_util.hpp"

using namespace rectipoly;
using testutil::check_error;

namespace {

// Classification with the colors overridden: keeps the true angles but
// declares exactly `reds` red, so graph construction can be exercised on
// meshes whose honest classification is all-green.
EdgeClassification fabricate_reds(const Mesh& mesh,
                                  std::vector<Index> reds) {
  EdgeClassification cls = classify_edges(mesh);
  cls.colors.assign(mesh.edge_count(), EdgeColor::Green);
  std::sort(reds.begin(), reds.end());
  for (Index e : reds) cls.colors[e] = EdgeColor::Red;
  cls.red_edges = std::move(reds);
  cls.red_count = Index(cls.red_edges.size());
  cls.green_count = mesh.edge_count() - cls.red_count;
  return cls;
}

// Two unit cubes stacked into a 1 x 1 x 2 box; the mid-ring vertices are
// straight joints of the side walls.
Mesh stacked_box() {
  std::vector<Vec3> vs;
  for (int z = 0; z <= 2; ++z) {
    vs.push_back(Vec3(0, 0, z));
    vs.push_back(Vec3(1, 0, z));
    vs.push_back(Vec3(1, 1, z));
    vs.push_back(Vec3(0, 1, z));
  }
  std::vector<std::vector<Index>> fs = {
      {0, 3, 2, 1},  {8, 9, 10, 11},
      {0, 1, 5, 4},  {1, 2, 6, 5},  {2, 3, 7, 6},  {3, 0, 4, 7},
      {4, 5, 9, 8},  {5, 6, 10, 9}, {6, 7, 11, 10}, {7, 4, 8, 11}};
  return build_mesh(vs, fs, MeshMode::Closed);
}

// All edges of the cube's top face (a closed 4-cycle of red-degree-2
// corners).
std::vector<Index> top_square_edges(const Mesh& cube) {
  std::vector<Index> reds;
  for (Index e = 0; e < cube.edge_count(); ++e)
    if (cube.vertices[cube.edges[e].a].z() > 0.5 &&
        cube.vertices[cube.edges[e].b].z() > 0.5)
      reds.push_back(e);
  return reds;
}

}  // namespace

TEST_SUITE("redgraph") {

TEST_CASE("octopus red graph: every red edge survives as its own arc") {
  const Mesh oct = make_octopus(3.0);
  const EdgeClassification cls = classify_edges(oct);
  const RedGraph rg = build_red_graph(oct, cls);

  CHECK(rg.nodes.size() == 30);
  CHECK(rg.arcs.size() == 84);
  CHECK(rg.component_count == 1);
  for (Index c : rg.component_of_node) CHECK(c == 0);

  // No vertex has red degree 2, so no chain contraction happens: arcs are
  // in bijection with the red mesh edges.
  std::vector<Index> covered;
  for (const RedArc& arc : rg.arcs) {
    REQUIRE(arc.mesh_edges.size() == 1);
    CHECK(arc.via_vertices.empty());
    covered.push_back(arc.mesh_edges[0]);
    const Edge& me = oct.edges[arc.mesh_edges[0]];
    const std::set<Index> got = {rg.nodes[arc.node_a].vertex,
                                 rg.nodes[arc.node_b].vertex};
    const std::set<Index> want = {me.a, me.b};
    CHECK(got == want);
  }
  std::sort(covered.begin(), covered.end());
  CHECK(covered == cls.red_edges);

  // Rotations: degree histogram {5: 24, 8: 6}; each directed arc end
  // appears in exactly one rotation, at its own node.
  std::map<std::size_t, int> degrees;
  std::set<std::pair<Index, int>> seen;
  for (std::size_t n = 0; n < rg.nodes.size(); ++n) {
    const RedGraphNode& node = rg.nodes[n];
    ++degrees[node.rotation.size()];
    for (const DirectedArc& da : node.rotation) {
      CHECK(seen.insert({da.arc, da.dir}).second);
      const RedArc& arc = rg.arcs[da.arc];
      CHECK((da.dir == 0 ? arc.node_a : arc.node_b) == Index(n));
    }
  }
  const std::map<std::size_t, int> expected_degrees = {{5, 24}, {8, 6}};
  CHECK(degrees == expected_degrees);
  CHECK(seen.size() == 168);
}

TEST_CASE("octopus facial walks and the exact component statistics") {
  const Mesh oct = make_octopus(3.0);
  const RedGraph rg = build_red_graph(oct, classify_edges(oct));

  const std::vector<FacialWalk> walks = facial_walks(rg);
  CHECK(walks.size() == 42);
  std::set<std::pair<Index, int>> steps;
  for (const FacialWalk& w : walks) {
    CHECK(w.steps.size() == 4);
    for (const DirectedArc& da : w.steps)
      CHECK(steps.insert({da.arc, da.dir}).second);
  }
  CHECK(steps.size() == 168);  // every directed arc in exactly one walk

  const std::vector<ComponentStats> stats = red_component_stats(rg, -12);
  REQUIRE(stats.size() == 1);
  const ComponentStats& s = stats[0];
  CHECK(s.node_count == 30);
  CHECK(s.arc_count == 84);
  CHECK(s.mesh_edge_count == 84);
  CHECK(s.node_vertices.size() == 30);
  const std::map<Index, Index> expected_deg = {{5, 24}, {8, 6}};
  CHECK(s.degree_histogram == expected_deg);
  CHECK(s.average_degree == Rational(28, 5));
  CHECK(s.average_degree.to_string() == "28/5");
  const std::map<Index, Index> expected_walks = {{4, 42}};
  CHECK(s.walk_length_histogram == expected_walks);
  CHECK(s.min_walk_length == 4);
  CHECK(s.walk_count == 42);

  // The Euler bound is tight here: both sides equal -336/5.
  CHECK(s.bound.holds);
  CHECK(s.bound.lhs == Rational(-336, 5));
  CHECK(s.bound.rhs == Rational(-336, 5));
  CHECK(s.bound.slack == Rational(0));
}

TEST_CASE("orthogonal models have empty red graphs") {
  for (const Mesh& mesh : {make_cube(1.0), make_frame_torus(3, 1, 1)}) {
    const EdgeClassification cls = classify_edges(mesh);
    CHECK(cls.red_count == 0);
    const RedGraph rg = build_red_graph(mesh, cls);
    CHECK(rg.nodes.empty());
    CHECK(rg.arcs.empty());
    CHECK(rg.component_count == 0);
    CHECK(facial_walks(rg).empty());
    CHECK(red_component_stats(rg, 2).empty());
  }
}

TEST_CASE("euler bound: exact rational evaluation") {
  struct Case {
    std::int64_t faces;
    Rational degree;
    std::int64_t k;
    std::int64_t chi;
    bool holds;
    Rational lhs, rhs, slack;
  };
  const Case cases[] = {
      // chi = 2, triangle walks: degree 6 zeroes the left side.
      {26, Rational(6), 3, 2, false, Rational(0), Rational(12), Rational(-12)},
      {29, Rational(13, 2), 3, 2, false, Rational(-29, 4), Rational(13),
       Rational(-81, 4)},
      {20, Rational(5), 3, 2, true, Rational(10), Rational(10), Rational(0)},
      // chi = 2, quadrilateral walks: degree 4 zeroes the left side.
      {10, Rational(4), 4, 2, false, Rational(0), Rational(8), Rational(-8)},
      {14, Rational(5), 4, 2, false, Rational(-14), Rational(10),
       Rational(-24)},
      {6, Rational(3), 4, 2, true, Rational(6), Rational(6), Rational(0)},
      // chi = 0: the bound degenerates to lhs >= 0.
      {10, Rational(4), 4, 0, true, Rational(0), Rational(0), Rational(0)},
      {10, Rational(9, 2), 4, 0, false, Rational(-5), Rational(0),
       Rational(-5)},
      {10, Rational(7, 2), 4, 0, true, Rational(5), Rational(0), Rational(5)},
      // 62 quadrilateral walks at average degree 240/62: slack only 8/31.
      {62, Rational(240, 62), 4, 2, true, Rational(8), Rational(240, 31),
       Rational(8, 31)},
  };
  for (const Case& c : cases) {
    CAPTURE(c.faces);
    CAPTURE(c.degree.to_string());
    const EulerBoundResult r = euler_bound(c.faces, c.degree, c.k, c.chi);
    CHECK(r.holds == c.holds);
    CHECK(r.lhs == c.lhs);
    CHECK(r.rhs == c.rhs);
    CHECK(r.slack == c.slack);
    CHECK(r.slack == r.lhs - r.rhs);
  }
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(56, 10) == Rational(28, 5));
  CHECK(Rational(56, 10).num() == 28);
  CHECK(Rational(56, 10).den() == 5);
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, -2).den() == 2);
  CHECK(Rational(-3, -6) == Rational(1, 2));

  CHECK(Rational(7).to_string() == "7");
  CHECK(Rational(28, 5).to_string() == "28/5");
  CHECK(Rational(1, -2).to_string() == "-1/2");
  CHECK(Rational().to_string() == "0");

  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(3, 4) == Rational(2, 3));
  CHECK(-Rational(1, 2) == Rational(-1, 2));

  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(28, 5) > Rational(5));
  CHECK(Rational(28, 5) <= Rational(28, 5));
  CHECK(Rational(28, 5) >= Rational(28, 5));
  CHECK(Rational(1, 3) != Rational(1, 2));
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5).epsilon(1e-15));

  check_error(ErrorKind::InvalidArgument, [] { Rational(3, 0); });
}

TEST_CASE("facial walks of synthetic graphs") {
  SUBCASE("a bridge is traversed twice by one walk") {
    RedGraph g;
    g.nodes.resize(2);
    g.nodes[0].vertex = 0;
    g.nodes[0].rotation = {{0, 0}};
    g.nodes[1].vertex = 1;
    g.nodes[1].rotation = {{0, 1}};
    g.arcs.push_back({0, 1, {0}, {}});
    g.component_of_node = {0, 0};
    g.component_count = 1;
    const std::vector<FacialWalk> walks = facial_walks(g);
    REQUIRE(walks.size() == 1);
    CHECK(walks[0].steps.size() == 2);
    CHECK(walks[0].steps[0].arc == 0);
    CHECK(walks[0].steps[1].arc == 0);
    CHECK(walks[0].steps[0].dir != walks[0].steps[1].dir);
  }
  SUBCASE("a 4-cycle bounds two quadrilateral walks") {
    RedGraph g;
    g.nodes.resize(4);
    for (Index i = 0; i < 4; ++i) {
      g.nodes[i].vertex = i;
      g.nodes[i].rotation = {{i, 0}, {(i + 3) % 4, 1}};
      g.arcs.push_back({i, (i + 1) % 4, {i}, {}});
      g.component_of_node.push_back(0);
    }
    g.component_count = 1;
    const std::vector<FacialWalk> walks = facial_walks(g);
    REQUIRE(walks.size() == 2);
    std::set<std::pair<Index, int>> steps;
    for (const FacialWalk& w : walks) {
      CHECK(w.steps.size() == 4);
      for (const DirectedArc& da : w.steps)
        CHECK(steps.insert({da.arc, da.dir}).second);
    }
    CHECK(steps.size() == 8);
  }
}

TEST_CASE("red chains contract through straight degree-2 joints") {
  const Mesh box = stacked_box();
  const Topology topo = topology(box);
  CHECK(topo.vertex_count == 12);
  CHECK(topo.edge_count == 20);
  CHECK(topo.face_count == 10);
  CHECK(topo.euler_characteristic == 2);
  CHECK(signed_volume(box) == doctest::Approx(2.0).epsilon(1e-12));

  // Declare the eight vertical edges red: each mid-ring vertex then has
  // red degree 2 with collinear edges, so the two-edge chains contract.
  std::vector<Index> reds;
  for (Index v = 0; v < 4; ++v) {
    reds.push_back(*box.find_edge(v, v + 4));
    reds.push_back(*box.find_edge(v + 4, v + 8));
  }
  const RedGraph rg = build_red_graph(box, fabricate_reds(box, reds));
  CHECK(rg.nodes.size() == 8);
  REQUIRE(rg.arcs.size() == 4);
  CHECK(rg.component_count == 4);
  for (const RedArc& arc : rg.arcs) {
    CHECK(arc.mesh_edges.size() == 2);
    REQUIRE(arc.via_vertices.size() == 1);
    const Index mid = arc.via_vertices[0];
    CHECK(mid >= 4);
    CHECK(mid < 8);
    const std::set<Index> ends = {rg.nodes[arc.node_a].vertex,
                                  rg.nodes[arc.node_b].vertex};
    const std::set<Index> want = {mid - 4, mid + 4};
    CHECK(ends == want);
  }

  const std::vector<ComponentStats> stats = red_component_stats(rg, 2);
  REQUIRE(stats.size() == 4);
  for (const ComponentStats& s : stats) {
    CHECK(s.node_count == 2);
    CHECK(s.arc_count == 1);
    CHECK(s.mesh_edge_count == 2);
    CHECK(s.average_degree == Rational(1));
    const std::map<Index, Index> expected_deg = {{1, 2}};
    CHECK(s.degree_histogram == expected_deg);
    CHECK(s.min_walk_length == 2);
    CHECK(s.walk_count == 1);
    CHECK(s.bound.holds);
    CHECK(s.bound.lhs == Rational(2));
    CHECK(s.bound.rhs == Rational(2));
    CHECK(s.bound.slack == Rational(0));
  }
}

TEST_CASE("non-collinear and closed degree-2 chains are rejected") {
  const Mesh cube = make_cube(1.0);
  const std::vector<Index> square = top_square_edges(cube);
  REQUIRE(square.size() == 4);

  SUBCASE("an open chain with a right-angle joint") {
    // Two adjacent top edges: their shared corner has red degree 2 but the
    // edges meet at a right angle.
    std::vector<Index> ell = {square[0]};
    for (std::size_t i = 1; i < square.size(); ++i) {
      const Edge& e0 = cube.edges[square[0]];
      const Edge& ei = cube.edges[square[i]];
      if (ei.a == e0.a || ei.a == e0.b || ei.b == e0.a || ei.b == e0.b) {
        ell.push_back(square[i]);
        break;
      }
    }
    REQUIRE(ell.size() == 2);
    const EdgeClassification cls = fabricate_reds(cube, ell);
    check_error(ErrorKind::CollinearityViolation,
                [&] { build_red_graph(cube, cls); });

    // With the collinearity gate disabled the chain contracts normally.
    const RedGraph rg = build_red_graph(cube, cls, 10.0);
    CHECK(rg.nodes.size() == 2);
    REQUIRE(rg.arcs.size() == 1);
    CHECK(rg.component_count == 1);
    CHECK(rg.arcs[0].mesh_edges.size() == 2);
    REQUIRE(rg.arcs[0].via_vertices.size() == 1);
    const Edge& e0 = cube.edges[ell[0]];
    const Edge& e1 = cube.edges[ell[1]];
    const Index shared = (e1.a == e0.a || e1.a == e0.b) ? e1.a : e1.b;
    CHECK(rg.arcs[0].via_vertices[0] == shared);
  }

  SUBCASE("a closed chain has no node to anchor an arc") {
    const EdgeClassification cls = fabricate_reds(cube, square);
    check_error(ErrorKind::CollinearityViolation,
                [&] { build_red_graph(cube, cls); });
    // Even with collinearity waived: a cycle of degree-2 vertices yields
    // no node at all, which straight joints could never produce anyway.
    check_error(ErrorKind::CollinearityViolation,
                [&] { build_red_graph(cube, cls, 10.0); });
  }
}

TEST_CASE("genus audit verdicts") {
  SUBCASE("cube and frame torus are consistent") {
    const AuditReport cube = g01_audit(make_cube(1.0));
    CHECK(cube.verdict == AuditVerdict::Consistent);
    CHECK(cube.genus == 0);
    CHECK(cube.red_edge_count == 0);
    CHECK(cube.min_red_degree == 0);
    CHECK(cube.degree_floor_ok);
    CHECK(cube.components.empty());
    CHECK(cube.offending_edges.empty());

    const AuditReport frame = g01_audit(make_frame_torus(3, 1, 1));
    CHECK(frame.verdict == AuditVerdict::Consistent);
    CHECK(frame.genus == 1);
    CHECK(frame.red_edge_count == 0);
  }

  SUBCASE("genus 7 imposes no constraint") {
    const AuditReport oct = g01_audit(make_octopus(3.0));
    CHECK(oct.verdict == AuditVerdict::NoConstraint);
    CHECK(oct.genus == 7);
    CHECK(oct.red_edge_count == 84);
    CHECK(oct.min_red_degree == 5);
    CHECK(oct.degree_floor_ok);
    CHECK(oct.components.size() == 1);
    CHECK(oct.offending_edges.empty());
  }

  SUBCASE("a genus-0 mesh with red edges is flagged inconsistent") {
    // A cube rotated off-axis and pushed far from the origin: rounding
    // leaves every dihedral a hair away from pi/2, so an absurdly small
    // color tolerance misclassifies all 12 edges.
    const Mesh cube = make_cube(1.0);
    const Eigen::AngleAxisd rot(0.7, Vec3(1, 2, 3).normalized());
    const Vec3 offset(101, 97, 100);
    std::vector<Vec3> vs;
    for (const Vec3& v : cube.vertices) vs.push_back(rot * v + offset);
    const Mesh skew = build_mesh(vs, cube.faces, MeshMode::Closed);

    const AuditReport audit = g01_audit(skew, 1e-9, 1e-18);
    CHECK(audit.verdict == AuditVerdict::Inconsistent);
    CHECK(audit.genus == 0);
    CHECK(audit.red_edge_count == 12);
    CHECK(audit.min_red_degree == 3);
    CHECK(!audit.degree_floor_ok);
    CHECK(audit.components.size() == 1);
    CHECK(audit.offending_edges.size() == 12);
    REQUIRE(audit.deviations.size() == 12);
    for (double d : audit.deviations) {
      CHECK(d > 0);
      CHECK(d < 1e-9);
    }
    // At the normal tolerance the same mesh audits clean.
    CHECK(g01_audit(skew).verdict == AuditVerdict::Consistent);
  }

  SUBCASE("non-rectangle faces are refused") {
    const std::vector<Vec3> vs = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                                  {0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
    const std::vector<std::vector<Index>> fs = {
        {0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
    const Mesh prism = build_mesh(vs, fs, MeshMode::Closed);
    check_error(ErrorKind::NotRectangleFaced, [&] { g01_audit(prism); });
  }
}

}  // TEST_SUITE("redgraph")
