#include "rectipoly/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rectipoly {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

// 2D frame of a (validated planar) face and the loop projected into it;
// counterclockwise because the normal points outward.
std::vector<Vec2> flatten_face(const Mesh& mesh, Index face, Vec3* normal_out) {
  const auto& loop = mesh.faces[face];
  const Vec3 n = mesh.face_normal(face);
  Vec3 e0 = mesh.vertices[loop[1]] - mesh.vertices[loop[0]];
  e0 -= n * n.dot(e0);
  e0.normalize();
  const Vec3 e1 = n.cross(e0);
  std::vector<Vec2> flat(loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3 d = mesh.vertices[loop[i]] - mesh.vertices[loop[0]];
    flat[i] = Vec2(d.dot(e0), d.dot(e1));
  }
  if (normal_out) *normal_out = n;
  return flat;
}

// Interior angle of a CCW planar polygon at vertex i, in (0, 2*pi).
double interior_angle(const std::vector<Vec2>& flat, std::size_t i) {
  const std::size_t m = flat.size();
  const Vec2 u = flat[(i + 1) % m] - flat[i];
  const Vec2 w = flat[(i + m - 1) % m] - flat[i];
  double ang = std::atan2(u.x() * w.y() - u.y() * w.x(), u.dot(w));
  if (ang <= 0) ang += 2.0 * M_PI;
  return ang;
}

}  // namespace

double dihedral_angle(const Mesh& mesh, Index edge) {
  if (edge < 0 || edge >= mesh.edge_count())
    throw Error(ErrorKind::InvalidArgument,
                "edge index " + std::to_string(edge) + " out of range");
  const Edge& e = mesh.edges[edge];
  if (e.face_fwd == -1 || e.face_bwd == -1)
    throw Error(ErrorKind::InvalidArgument,
                "dihedral_angle on boundary edge " + std::to_string(edge));
  const Vec3 t = (mesh.vertices[e.b] - mesh.vertices[e.a]).normalized();
  // In-face directions away from the edge: the face interior lies to the
  // left of its traversal direction, i.e. along normal x traversal.
  const Vec3 u1 = mesh.face_normal(e.face_fwd).cross(t);
  const Vec3 u2 = mesh.face_normal(e.face_bwd).cross(-t);
  double theta = std::atan2(-u1.cross(u2).dot(t), u1.dot(u2));
  if (theta <= 0) theta += 2.0 * M_PI;
  return theta;
}

double folded_dihedral(double theta) {
  return std::min(theta, 2.0 * M_PI - theta);
}

EdgeClassification classify_edges(const Mesh& mesh, double tol) {
  EdgeClassification cls;
  const Index ne = mesh.edge_count();
  cls.angles.resize(ne);
  cls.folded.resize(ne);
  cls.nearest_k.resize(ne);
  cls.deviations.resize(ne);
  cls.colors.resize(ne);
  for (Index e = 0; e < ne; ++e) {
    const double theta = dihedral_angle(mesh, e);
    const int k = int(std::lround(theta / kHalfPi));
    const double dev = std::abs(theta - k * kHalfPi);
    cls.angles[e] = theta;
    cls.folded[e] = folded_dihedral(theta);
    cls.nearest_k[e] = k;
    cls.deviations[e] = dev;
    if (dev <= tol) {
      cls.colors[e] = EdgeColor::Green;
      ++cls.green_count;
    } else {
      cls.colors[e] = EdgeColor::Red;
      cls.red_edges.push_back(e);
      ++cls.red_count;
    }
  }
  return cls;
}

RectangleVerdict rectangle_check(const Mesh& mesh, double tol) {
  RectangleVerdict verdict;
  std::vector<std::pair<double, double>> sides;  // per rectangle face

  for (Index f = 0; f < mesh.face_count(); ++f) {
    const auto& loop = mesh.faces[f];
    const std::vector<Vec2> flat = flatten_face(mesh, f, nullptr);

    FaceRectangleInfo info;
    info.face = f;

    // Corners = vertices whose interior angle is not straight; straight
    // vertices belong to neighboring faces' corners, not this face's.
    std::vector<std::size_t> corners;
    for (std::size_t i = 0; i < loop.size(); ++i)
      if (std::abs(interior_angle(flat, i) - M_PI) > tol) corners.push_back(i);
    info.corner_count = Index(corners.size());

    double diameter = 0;
    for (std::size_t i = 0; i < flat.size(); ++i)
      for (std::size_t j = i + 1; j < flat.size(); ++j)
        diameter = std::max(diameter, (flat[i] - flat[j]).norm());

    if (corners.size() == 4) {
      double max_dev = 0;
      for (std::size_t c : corners)
        max_dev = std::max(max_dev,
                           std::abs(interior_angle(flat, c) - kHalfPi));
      info.max_angle_deviation = max_dev;

      double s[4];
      for (int i = 0; i < 4; ++i)
        s[i] = (flat[corners[(i + 1) % 4]] - flat[corners[i]]).norm();
      const double len_tol = tol * std::max(1.0, diameter);
      if (max_dev <= tol && std::abs(s[0] - s[2]) <= len_tol &&
          std::abs(s[1] - s[3]) <= len_tol) {
        info.is_rectangle = true;
        const double sa = 0.5 * (s[0] + s[2]);
        const double sb = 0.5 * (s[1] + s[3]);
        info.side_a = std::min(sa, sb);
        info.side_b = std::max(sa, sb);
      }
    }

    if (info.is_rectangle)
      sides.emplace_back(info.side_a, info.side_b);
    else
      verdict.offenders.push_back(f);
    verdict.faces.push_back(info);
  }

  verdict.all_rectangles = verdict.offenders.empty();

  // Congruence buckets with tolerance 1e-6 (coarser than the construction
  // noise, finer than any distinct side pair in the data).
  std::sort(sides.begin(), sides.end());
  constexpr double kBucketTol = 1e-6;
  for (const auto& [a, b] : sides) {
    if (!verdict.inventory.empty() &&
        std::abs(a - verdict.inventory.back().side_a) <= kBucketTol &&
        std::abs(b - verdict.inventory.back().side_b) <= kBucketTol) {
      ++verdict.inventory.back().count;
    } else {
      verdict.inventory.push_back(RectangleBucket{a, b, 1});
    }
  }
  return verdict;
}

OrthogonalityCertificate orthogonality_certificate(const Mesh& mesh,
                                                   double tol) {
  const EdgeClassification cls = classify_edges(mesh, tol);
  OrthogonalityCertificate cert;
  cert.pass = cls.red_count == 0;
  cert.red_edge_count = cls.red_count;
  cert.red_edges = cls.red_edges;
  return cert;
}

}  // namespace rectipoly
