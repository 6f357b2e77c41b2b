#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"

#include "rectipoly/constructions.hpp"
#include "rectipoly/mesh.hpp"
#include "rectipoly/ortho.hpp"
#include "test_util.hpp"

using namespace rectipoly;
using testutil::angle_histogram;
using testutil::angle_key;
using testutil::check_error;

namespace {

const double kAtanSqrt2 = std::atan(std::sqrt(2.0));

Mesh open_face(const std::vector<Vec3>& pts) {
  std::vector<Index> loop(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) loop[i] = Index(i);
  return build_mesh(pts, {loop}, MeshMode::Open);
}

// Inventory as a (side_a, side_b) -> count map keyed at 1e-6.
std::map<std::pair<long, long>, Index> inventory_map(
    const RectangleVerdict& verdict) {
  std::map<std::pair<long, long>, Index> m;
  for (const RectangleBucket& b : verdict.inventory)
    m[{angle_key(b.side_a), angle_key(b.side_b)}] += b.count;
  return m;
}

}  // namespace

TEST_SUITE("ortho") {

TEST_CASE("cube: every dihedral is a right angle") {
  const Mesh cube = make_cube(1.0);
  const EdgeClassification cls = classify_edges(cube);
  CHECK(cls.red_count == 0);
  CHECK(cls.green_count == 12);
  CHECK(cls.red_edges.empty());
  for (Index e = 0; e < cube.edge_count(); ++e) {
    CHECK(std::abs(cls.angles[e] - M_PI / 2) < 1e-12);
    CHECK(cls.folded[e] == cls.angles[e]);
    CHECK(cls.nearest_k[e] == 1);
    CHECK(cls.deviations[e] < 1e-12);
    CHECK(cls.colors[e] == EdgeColor::Green);
  }
  const OrthogonalityCertificate cert = orthogonality_certificate(cube);
  CHECK(cert.pass);
  CHECK(cert.red_edge_count == 0);
}

TEST_CASE("reversed cube: reflex dihedrals, negative volume, still green") {
  const Mesh cube = make_cube(1.0);
  std::vector<std::vector<Index>> rev = cube.faces;
  for (auto& loop : rev) std::reverse(loop.begin(), loop.end());
  const Mesh inward = build_mesh(cube.vertices, rev, MeshMode::Closed);
  CHECK(std::abs(signed_volume(inward) + 1.0) < 1e-12);
  const EdgeClassification cls = classify_edges(inward);
  for (Index e = 0; e < inward.edge_count(); ++e) {
    CHECK(std::abs(cls.angles[e] - 3 * M_PI / 2) < 1e-12);
    CHECK(std::abs(cls.folded[e] - M_PI / 2) < 1e-12);
  }
  CHECK(cls.red_count == 0);
  CHECK(orthogonality_certificate(inward).pass);
}

TEST_CASE("frame torus: rectilinear dihedrals of all three kinds") {
  const Mesh frame = make_frame_torus(3, 1, 1);
  const EdgeClassification cls = classify_edges(frame);
  const std::map<long, int> raw = angle_histogram(cls.angles);
  const std::map<long, int> expected_raw = {{angle_key(M_PI / 2), 28},
                                            {angle_key(M_PI), 12},
                                            {angle_key(3 * M_PI / 2), 4}};
  CHECK(raw == expected_raw);
  const std::map<long, int> folded = angle_histogram(cls.folded);
  const std::map<long, int> expected_folded = {{angle_key(M_PI / 2), 32},
                                               {angle_key(M_PI), 12}};
  CHECK(folded == expected_folded);
  CHECK(cls.red_count == 0);
  CHECK(orthogonality_certificate(frame).pass);
}

TEST_CASE("octopus: four dihedral families, none rectilinear") {
  for (double L : {2.0, 3.0, 5.5}) {
    CAPTURE(L);
    const Mesh oct = make_octopus(L);
    const EdgeClassification cls = classify_edges(oct);
    CHECK(cls.red_count == 84);
    CHECK(cls.green_count == 0);
    CHECK(cls.red_edges.size() == 84);

    // The slants are L-independent: the arm geometry only stretches along
    // the prism axis.
    const std::map<long, int> expected_raw = {
        {angle_key(kAtanSqrt2), 24},
        {angle_key(M_PI - 2 * kAtanSqrt2), 12},
        {angle_key(3 * M_PI / 4), 24},
        {angle_key(5 * M_PI / 3), 24}};
    CHECK(angle_histogram(cls.angles) == expected_raw);

    const std::map<long, int> expected_folded = {
        {angle_key(kAtanSqrt2), 24},
        {angle_key(M_PI / 3), 24},
        {angle_key(M_PI - 2 * kAtanSqrt2), 12},
        {angle_key(3 * M_PI / 4), 24}};
    CHECK(angle_histogram(cls.folded) == expected_folded);

    const OrthogonalityCertificate cert = orthogonality_certificate(oct);
    CHECK(!cert.pass);
    CHECK(cert.red_edge_count == 84);
    CHECK(cert.red_edges.size() == 84);
  }
}

TEST_CASE("octopus extent matches the apex-square distance") {
  for (double L : {3.0, 5.5}) {
    CAPTURE(L);
    const Mesh oct = make_octopus(L);
    double mx = 0;
    for (const Vec3& v : oct.vertices)
      mx = std::max(mx, v.cwiseAbs().maxCoeff());
    CHECK(std::abs(mx - (0.5 + L / std::sqrt(2.0))) < 1e-12 * (1.0 + L));
  }
}

TEST_CASE("rectangle check: frame torus inventory and straight vertices") {
  const Mesh frame = make_frame_torus(3, 1, 1);
  const RectangleVerdict verdict = rectangle_check(frame);
  CHECK(verdict.all_rectangles);
  CHECK(verdict.offenders.empty());
  const std::map<std::pair<long, long>, Index> expected = {
      {{angle_key(1.0), angle_key(1.0)}, 8},
      {{angle_key(1.0), angle_key(2.0)}, 12}};
  CHECK(inventory_map(verdict) == expected);

  // The eight annulus faces carry five-vertex loops whose fifth vertex is
  // straight; it must collapse to a four-corner rectangle.
  int pentagons = 0;
  for (Index f = 0; f < frame.face_count(); ++f) {
    if (frame.faces[f].size() == 5) {
      ++pentagons;
      CHECK(verdict.faces[f].corner_count == 4);
      CHECK(verdict.faces[f].is_rectangle);
    }
  }
  CHECK(pentagons == 8);
}

TEST_CASE("rectangle check: octopus inventory") {
  const Mesh oct = make_octopus(3.0);
  const RectangleVerdict verdict = rectangle_check(oct);
  CHECK(verdict.all_rectangles);
  const std::map<std::pair<long, long>, Index> expected = {
      {{angle_key(std::sqrt(3.0) / 2), angle_key(3.0)}, 24},
      {{angle_key(1.0), angle_key(1.0)}, 6},
      {{angle_key(1.0), angle_key(3.0)}, 12}};
  CHECK(inventory_map(verdict) == expected);
}

TEST_CASE("rectangle check: non-rectangles are reported") {
  SUBCASE("L-shaped hexagon") {
    const Mesh hex = open_face({{0, 0, 0},
                                {2, 0, 0},
                                {2, 1, 0},
                                {1, 1, 0},
                                {1, 2, 0},
                                {0, 2, 0}});
    const RectangleVerdict verdict = rectangle_check(hex);
    CHECK(!verdict.all_rectangles);
    REQUIRE(verdict.offenders.size() == 1);
    CHECK(verdict.offenders[0] == 0);
    CHECK(verdict.faces[0].corner_count == 6);
    CHECK(!verdict.faces[0].is_rectangle);
  }
  SUBCASE("rhombus with non-right angles") {
    const Mesh rhombus =
        open_face({{0, 0, 0}, {2, 1, 0}, {4, 0, 0}, {2, -1, 0}});
    const RectangleVerdict verdict = rectangle_check(rhombus);
    CHECK(!verdict.all_rectangles);
    CHECK(verdict.faces[0].corner_count == 4);
    CHECK(!verdict.faces[0].is_rectangle);
    CHECK(verdict.faces[0].max_angle_deviation > 0.4);
  }
  SUBCASE("rectangle with an extra straight vertex passes") {
    const Mesh rect = open_face(
        {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {0, 1, 0}});
    const RectangleVerdict verdict = rectangle_check(rect);
    CHECK(verdict.all_rectangles);
    CHECK(verdict.faces[0].corner_count == 4);
    CHECK(verdict.faces[0].is_rectangle);
    CHECK(std::abs(verdict.faces[0].side_a - 1.0) < 1e-12);
    CHECK(std::abs(verdict.faces[0].side_b - 2.0) < 1e-12);
  }
}

TEST_CASE("dihedral_angle: coplanar faces and error cases") {
  // Two coplanar unit squares joined along an interior edge of an open
  // mesh: the dihedral is exactly pi.
  std::vector<Vec3> vs = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0},
                          {0, 1, 0}, {2, 0, 0}, {2, 1, 0}};
  std::vector<std::vector<Index>> fs = {{0, 1, 2, 3}, {1, 4, 5, 2}};
  const Mesh open = build_mesh(vs, fs, MeshMode::Open);
  const auto shared = open.find_edge(1, 2);
  REQUIRE(shared.has_value());
  CHECK(dihedral_angle(open, *shared) == doctest::Approx(M_PI).epsilon(1e-12));

  const auto boundary = open.find_edge(0, 1);
  REQUIRE(boundary.has_value());
  check_error(ErrorKind::InvalidArgument,
              [&] { dihedral_angle(open, *boundary); });
  check_error(ErrorKind::InvalidArgument, [&] { dihedral_angle(open, -1); });
  check_error(ErrorKind::InvalidArgument, [&] { dihedral_angle(open, 99); });
}

TEST_CASE("folded_dihedral") {
  CHECK(folded_dihedral(0.3) == doctest::Approx(0.3));
  CHECK(folded_dihedral(M_PI) == doctest::Approx(M_PI));
  CHECK(folded_dihedral(3 * M_PI / 2) == doctest::Approx(M_PI / 2));
  CHECK(folded_dihedral(5 * M_PI / 3) == doctest::Approx(M_PI / 3));
}

TEST_CASE("classification tolerance boundary") {
  // With a huge tolerance every octopus edge turns green; with a tiny one
  // nothing changes for the cube, whose deviations are at rounding level.
  const Mesh oct = make_octopus(3.0);
  const EdgeClassification loose = classify_edges(oct, 2.0);
  CHECK(loose.red_count == 0);
  CHECK(loose.green_count == 84);

  const Mesh cube = make_cube(1.0);
  const EdgeClassification tight = classify_edges(cube, 1e-13);
  CHECK(tight.red_count == 0);
}

}  // TEST_SUITE("ortho")
