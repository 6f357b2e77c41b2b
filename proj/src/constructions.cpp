#include "rectipoly/constructions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rectipoly/ortho.hpp"

namespace rectipoly {

namespace {

// Deduplicates exact coordinates (the constructions only apply signed
// permutations and exact sums, so shared vertices agree bit-for-bit; the
// numeric comparison also identifies -0.0 with +0.0).
class VertexPool {
 public:
  Index add(const Vec3& p) {
    const std::array<double, 3> key{p.x(), p.y(), p.z()};
    auto [it, fresh] = map_.emplace(key, Index(points_.size()));
    if (fresh) points_.push_back(p);
    return it->second;
  }

  std::vector<Vec3> take() { return std::move(points_); }

 private:
  std::map<std::array<double, 3>, Index> map_;
  std::vector<Vec3> points_;
};

Mesh assemble(const std::vector<std::vector<Vec3>>& point_loops,
              MeshMode mode) {
  VertexPool pool;
  std::vector<std::vector<Index>> faces;
  faces.reserve(point_loops.size());
  for (const auto& loop : point_loops) {
    std::vector<Index> face;
    face.reserve(loop.size());
    for (const Vec3& p : loop) face.push_back(pool.add(p));
    faces.push_back(std::move(face));
  }
  return build_mesh(pool.take(), std::move(faces), mode);
}

[[noreturn]] void self_check_fail(const std::string& what,
                                  const std::string& detail) {
  throw Error(ErrorKind::ConstructionSelfCheck, what + ": " + detail);
}

void check_counts(const std::string& what, const Mesh& mesh, Index V, Index E,
                  Index F, int genus) {
  const Topology t = topology(mesh);
  if (t.vertex_count != V || t.edge_count != E || t.face_count != F ||
      t.genus != genus)
    self_check_fail(what, "got V=" + std::to_string(t.vertex_count) +
                              " E=" + std::to_string(t.edge_count) +
                              " F=" + std::to_string(t.face_count) +
                              " genus=" + std::to_string(t.genus) +
                              ", expected V=" + std::to_string(V) +
                              " E=" + std::to_string(E) +
                              " F=" + std::to_string(F) +
                              " genus=" + std::to_string(genus));
  if (signed_volume(mesh) <= 0)
    self_check_fail(what, "non-positive enclosed volume (inward orientation)");
}

void check_rectangles(const std::string& what, const Mesh& mesh) {
  const RectangleVerdict verdict = rectangle_check(mesh, 1e-9);
  if (!verdict.all_rectangles)
    self_check_fail(what, "face " + std::to_string(verdict.offenders.front()) +
                              " is not a rectangle");
}

// ---- octopus -------------------------------------------------------------

const std::array<Vec3, 6> kAxes = {Vec3(1, 0, 0),  Vec3(-1, 0, 0),
                                   Vec3(0, 1, 0),  Vec3(0, -1, 0),
                                   Vec3(0, 0, 1),  Vec3(0, 0, -1)};

// Rotation taking +z to the given axis (an exact signed permutation).
Vec3 cluster_rotate(const Vec3& axis, const Vec3& p) {
  if (axis.z() > 0.5) return p;
  if (axis.z() < -0.5) return Vec3(p.x(), -p.y(), -p.z());
  if (axis.x() > 0.5) return Vec3(p.z(), p.y(), -p.x());
  if (axis.x() < -0.5) return Vec3(-p.z(), p.y(), p.x());
  if (axis.y() > 0.5) return Vec3(p.x(), p.z(), -p.y());
  return Vec3(p.x(), -p.z(), p.y());
}

// Face loops of the octopus: six squares (one per axis) and, per pair of
// perpendicular axes, one prism = one L x 1 face plus two L x sqrt(3)/2
// faces. Templates are the faces of the (+z, +x) prism; a rotation with
// columns [v, u x v, u] carries them to the (u, v) prism.
std::vector<std::vector<Vec3>> octopus_loops(double L) {
  const double h = 0.5 + L / std::sqrt(2.0);
  const double hm = h - 0.5;

  std::vector<std::vector<Vec3>> loops;

  const std::vector<Vec3> square = {Vec3(0.5, -0.5, h), Vec3(0.5, 0.5, h),
                                    Vec3(-0.5, 0.5, h), Vec3(-0.5, -0.5, h)};
  for (const Vec3& u : kAxes) {
    std::vector<Vec3> loop;
    for (const Vec3& p : square) loop.push_back(cluster_rotate(u, p));
    loops.push_back(std::move(loop));
  }

  const std::vector<std::vector<Vec3>> prism = {
      {Vec3(0.5, -0.5, h), Vec3(h, -0.5, 0.5), Vec3(h, 0.5, 0.5),
       Vec3(0.5, 0.5, h)},
      {Vec3(0, 0, hm), Vec3(0.5, 0.5, h), Vec3(h, 0.5, 0.5), Vec3(hm, 0, 0)},
      {Vec3(0, 0, hm), Vec3(hm, 0, 0), Vec3(h, -0.5, 0.5),
       Vec3(0.5, -0.5, h)}};
  for (std::size_t i = 0; i < kAxes.size(); ++i) {
    for (std::size_t j = i + 1; j < kAxes.size(); ++j) {
      const Vec3& u = kAxes[i];
      const Vec3& v = kAxes[j];
      if (u.dot(v) != 0.0) continue;
      const Vec3 w = u.cross(v);
      for (const auto& tmpl : prism) {
        std::vector<Vec3> loop;
        for (const Vec3& p : tmpl)
          loop.push_back(v * p.x() + w * p.y() + u * p.z());
        loops.push_back(std::move(loop));
      }
    }
  }
  return loops;
}

void check_octopus_inventory(const std::string& what, const Mesh& mesh,
                             double L) {
  const RectangleVerdict verdict = rectangle_check(mesh, 1e-9);
  const double s32 = std::sqrt(3.0) / 2.0;
  const std::vector<RectangleBucket> expected = {
      {s32, L, 24}, {1.0, 1.0, 6}, {1.0, L, 12}};
  // Bucket order can vary: the computed 1 x L side may land a few ulps below
  // 1, swapping it ahead of the exact 1 x 1 bucket, so match unordered.
  bool ok = verdict.inventory.size() == expected.size();
  std::vector<bool> used(expected.size(), false);
  for (std::size_t i = 0; ok && i < verdict.inventory.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < expected.size() && !found; ++j) {
      if (used[j]) continue;
      if (std::abs(verdict.inventory[i].side_a - expected[j].side_a) <= 1e-9 &&
          std::abs(verdict.inventory[i].side_b - expected[j].side_b) <= 1e-9 &&
          verdict.inventory[i].count == expected[j].count) {
        used[j] = true;
        found = true;
      }
    }
    ok = found;
  }
  if (!ok) self_check_fail(what, "unexpected rectangle inventory");
}

}  // namespace

Mesh make_cube(double a) {
  if (!(a > 0))
    throw Error(ErrorKind::InvalidArgument, "cube side must be positive");
  const std::vector<std::vector<Vec3>> loops = {
      {Vec3(0, 0, 0), Vec3(0, a, 0), Vec3(a, a, 0), Vec3(a, 0, 0)},
      {Vec3(0, 0, a), Vec3(a, 0, a), Vec3(a, a, a), Vec3(0, a, a)},
      {Vec3(0, 0, 0), Vec3(a, 0, 0), Vec3(a, 0, a), Vec3(0, 0, a)},
      {Vec3(a, 0, 0), Vec3(a, a, 0), Vec3(a, a, a), Vec3(a, 0, a)},
      {Vec3(a, a, 0), Vec3(0, a, 0), Vec3(0, a, a), Vec3(a, a, a)},
      {Vec3(0, a, 0), Vec3(0, 0, 0), Vec3(0, 0, a), Vec3(0, a, a)}};
  Mesh mesh = assemble(loops, MeshMode::Closed);
  check_counts("make_cube", mesh, 8, 12, 6, 0);
  check_rectangles("make_cube", mesh);
  return mesh;
}

Mesh make_frame_torus(int outer, int hole, int height) {
  if (hole < 1 || outer <= hole || height < 1 || (outer - hole) % 2 != 0)
    throw Error(ErrorKind::InvalidArgument,
                "frame torus needs 0 < hole < outer, outer-hole even, "
                "height >= 1");
  const double o = outer, t = height;
  const double a = (outer - hole) / 2.0;
  const double b = a + hole;

  // Pinwheel partition of the top annulus; each loop is a rectangle with
  // one straight vertex, counterclockwise seen from above.
  const std::vector<std::vector<Vec2>> pinwheel = {
      {{0, 0}, {b, 0}, {b, a}, {a, a}, {0, a}},
      {{b, 0}, {o, 0}, {o, b}, {b, b}, {b, a}},
      {{o, b}, {o, o}, {a, o}, {a, b}, {b, b}},
      {{0, a}, {a, a}, {a, b}, {a, o}, {0, o}}};

  std::vector<std::vector<Vec3>> loops;
  for (const auto& flat : pinwheel) {
    std::vector<Vec3> top, bottom;
    for (const Vec2& p : flat) top.emplace_back(p.x(), p.y(), t);
    for (auto it = flat.rbegin(); it != flat.rend(); ++it)
      bottom.emplace_back(it->x(), it->y(), 0.0);
    loops.push_back(std::move(top));
    loops.push_back(std::move(bottom));
  }

  // Outer ring counterclockwise (with the pinwheel-induced points) and hole
  // ring clockwise, so every wall's normal faces away from the solid.
  const std::vector<Vec2> outer_ring = {{0, 0}, {b, 0}, {o, 0}, {o, b},
                                        {o, o}, {a, o}, {0, o}, {0, a}};
  const std::vector<Vec2> hole_ring = {{a, a}, {a, b}, {b, b}, {b, a}};
  for (const auto& ring : {outer_ring, hole_ring}) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Vec2 p = ring[i], q = ring[(i + 1) % ring.size()];
      loops.push_back({Vec3(p.x(), p.y(), 0), Vec3(q.x(), q.y(), 0),
                       Vec3(q.x(), q.y(), t), Vec3(p.x(), p.y(), t)});
    }
  }

  Mesh mesh = assemble(loops, MeshMode::Closed);
  check_counts("make_frame_torus", mesh, 24, 44, 20, 1);
  check_rectangles("make_frame_torus", mesh);
  const double vol = signed_volume(mesh);
  const double expect = double(outer) * outer * height -
                        double(hole) * hole * height;
  if (std::abs(vol - expect) > 1e-9 * expect)
    self_check_fail("make_frame_torus", "volume " + std::to_string(vol) +
                                            " != " + std::to_string(expect));
  return mesh;
}

Mesh make_octopus(double L) {
  if (!(L > std::sqrt(2.0)))
    throw Error(ErrorKind::InvalidArgument,
                "octopus needs L > sqrt(2) to keep the clusters disjoint");
  Mesh mesh = assemble(octopus_loops(L), MeshMode::Closed);
  check_counts("make_octopus", mesh, 30, 84, 42, 7);
  check_rectangles("make_octopus", mesh);
  check_octopus_inventory("make_octopus", mesh, L);
  return mesh;
}

Mesh make_octopus_cubes(double L) {
  if (!(L > std::sqrt(2.0)))
    throw Error(ErrorKind::InvalidArgument,
                "octopus needs L > sqrt(2) to keep the clusters disjoint");
  std::vector<std::vector<Vec3>> loops = octopus_loops(L);
  // The first six loops are the squares, one per axis in kAxes order;
  // replace each with the five exposed faces of an outward unit cube.
  std::vector<std::vector<Vec3>> out;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (i >= kAxes.size()) {
      out.push_back(loops[i]);
      continue;
    }
    const Vec3& u = kAxes[i];
    const std::vector<Vec3>& c = loops[i];
    std::vector<Vec3> top;
    for (int k = 0; k < 4; ++k) {
      const Vec3 tk = c[k] + u;
      const Vec3 tk1 = c[(k + 1) % 4] + u;
      out.push_back({c[k], c[(k + 1) % 4], tk1, tk});
      top.push_back(tk);
    }
    out.push_back(std::move(top));
  }
  Mesh mesh = assemble(out, MeshMode::Closed);
  check_counts("make_octopus_cubes", mesh, 54, 132, 66, 7);
  check_rectangles("make_octopus_cubes", mesh);
  return mesh;
}

StarGadget make_star_gadget(const std::string& pattern, std::uint64_t seed,
                            double edge_length, double tol) {
  const int n = int(pattern.size());
  if (n < 3)
    throw Error(ErrorKind::InvalidArgument,
                "star pattern needs at least 3 colors");
  for (char c : pattern)
    if (c != 'r' && c != 'g')
      throw Error(ErrorKind::InvalidArgument,
                  "star pattern must use only 'r' and 'g'");
  if (!(edge_length > 0))
    throw Error(ErrorKind::InvalidArgument, "edge length must be positive");

  const double half_pi = M_PI / 2.0;
  auto color_of = [&](double angle) {
    const double k = std::lround(angle / half_pi);
    return std::abs(angle - k * half_pi) <= tol ? 'g' : 'r';
  };

  Rng rng(seed);
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    SphericalLink link;
    try {
      link = sample_closed_link(n, rng, tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SamplingFailure) continue;
      throw;
    }

    Index offset = -1;
    for (int shift = 0; shift < n && offset < 0; ++shift) {
      bool match = true;
      for (int i = 0; i < n && match; ++i)
        match = pattern[(i + shift) % n] == color_of(link.angles[i]);
      if (match) offset = shift;
    }
    if (offset < 0) continue;

    // Realize as a fan of edge_length squares: one square per consecutive
    // point pair, all sharing the central vertex 0.
    const double s = edge_length;
    std::vector<Vec3> verts;
    verts.push_back(Vec3::Zero());
    for (int i = 0; i < n; ++i) verts.push_back(s * link.points[i]);
    for (int i = 0; i < n; ++i)
      verts.push_back(s * (link.points[i] + link.points[(i + 1) % n]));

    // The star order read back from the mesh traverses the sampled polygon
    // in one of the two windings; build whichever fan orientation yields
    // the forward traversal, then match the pattern against the mesh link.
    for (int flip = 0; flip < 2; ++flip) {
      std::vector<std::vector<Index>> faces;
      for (Index i = 0; i < n; ++i) {
        std::vector<Index> loop = {0, 1 + i, 1 + n + i, 1 + (i + 1) % n};
        if (flip) std::reverse(loop.begin(), loop.end());
        faces.push_back(std::move(loop));
      }
      Mesh mesh = build_mesh(verts, faces, MeshMode::Open);
      SphericalLink realized = spherical_link(mesh, 0, tol);
      if (realized.points.size() != std::size_t(n))
        self_check_fail("make_star_gadget", "star valence diverged");

      // Forward traversal: realized point i sits at sampled point i + r.
      int r = -1;
      for (int c = 0; c < n && r < 0; ++c)
        if ((realized.points[0] - link.points[c]).norm() < 1e-9) r = c;
      bool forward = r >= 0;
      for (int i = 1; forward && i < n; ++i)
        forward =
            (realized.points[i] - link.points[(i + r) % n]).norm() < 1e-9;
      if (!forward) continue;

      Index realized_offset = -1;
      for (int shift = 0; shift < n && realized_offset < 0; ++shift) {
        bool match = true;
        for (int i = 0; i < n && match; ++i)
          match = pattern[(i + shift) % n] == color_of(realized.angles[i]);
        if (match) realized_offset = shift;
      }
      if (realized_offset < 0)
        self_check_fail("make_star_gadget",
                        "realized colors diverge from the pattern");
      if (local_constraint_check(realized, tol).status !=
          LocalStatus::Consistent)
        self_check_fail("make_star_gadget",
                        "realized link violates a local lemma");

      StarGadget gadget;
      gadget.mesh = std::move(mesh);
      gadget.link = std::move(realized);
      gadget.pattern_offset = realized_offset;
      return gadget;
    }
    self_check_fail("make_star_gadget",
                    "fan realization does not reproduce the sampled link");
  }
  throw Error(ErrorKind::UnrealizablePattern,
              "pattern '" + pattern + "' not realized in " +
                  std::to_string(kAttempts) +
                  " solver attempts (patterns with exactly one or three "
                  "red edges are impossible)");
}

}  // namespace rectipoly
