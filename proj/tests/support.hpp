#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tapewrap/geometry.hpp"
#include "tapewrap/mesh_io.hpp"
#include "tapewrap/planner.hpp"

namespace tapewrap::test {

// Independent oracles. None of these call into the library's geometry kernel.

inline Vec3 oracle_closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return a + t * ab;
}

// Plane projection with barycentric containment; outside the triangle the
// nearest point lies on the boundary, so take the best clamped edge point.
inline Vec3 oracle_closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const Vec3 q = p - n.dot(p - a) / n.squaredNorm() * n;
  const double area = n.squaredNorm();
  const double u = n.dot((c - b).cross(q - b)) / area;
  const double v = n.dot((a - c).cross(q - c)) / area;
  const double w = 1.0 - u - v;
  if (u >= 0.0 && v >= 0.0 && w >= 0.0) return q;
  Vec3 best = oracle_closest_on_segment(p, a, b);
  for (const Vec3& cand : {oracle_closest_on_segment(p, b, c), oracle_closest_on_segment(p, c, a)}) {
    if ((cand - p).squaredNorm() < (best - p).squaredNorm()) best = cand;
  }
  return best;
}

// Grid minimization over barycentric coordinates.
inline Vec3 grid_closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, int steps) {
  Vec3 best = a;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double u = static_cast<double>(i) / steps;
      const double v = static_cast<double>(j) / steps;
      const Vec3 q = a + u * (b - a) + v * (c - a);
      const double d = (q - p).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = q;
      }
    }
  }
  return best;
}

struct OracleHit {
  Vec3 position;
  double distance = std::numeric_limits<double>::infinity();
};

inline OracleHit oracle_closest_on_mesh(const SurfaceMesh& mesh, const Vec3& p) {
  OracleHit best;
  for (const Triangle& t : mesh.triangles()) {
    const Vec3 q = oracle_closest_on_triangle(p, mesh.vertices()[t[0]], mesh.vertices()[t[1]], mesh.vertices()[t[2]]);
    const double d = (q - p).norm();
    if (d < best.distance) best = {q, d};
  }
  return best;
}

// Largest height of any point above any face plane, with planes rebuilt from
// the triangle corners.
inline double oracle_halfspace_excess(const SurfaceMesh& mesh, const std::vector<Vec3>& points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Triangle& t : mesh.triangles()) {
    const Vec3& a = mesh.vertices()[t[0]];
    const Vec3 n = (mesh.vertices()[t[1]] - a).cross(mesh.vertices()[t[2]] - a).normalized();
    for (const Vec3& q : points) worst = std::max(worst, n.dot(q - a));
  }
  return worst;
}

inline Rot3 oracle_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = {g(rng), g(rng), g(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Fixtures.

inline SurfaceMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> corners;
  for (int k = 0; k < 8; ++k) {
    corners.emplace_back(k & 1 ? hi.x() : lo.x(), k & 2 ? hi.y() : lo.y(), k & 4 ? hi.z() : lo.z());
  }
  return convex_hull(corners);
}

// Extruded heightfield z(x) over y in [-half_width, half_width], normals +z side.
inline SurfaceMesh extruded_profile(const std::vector<std::pair<double, double>>& profile, double half_width) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  for (const auto& [x, z] : profile) {
    vertices.emplace_back(x, -half_width, z);
    vertices.emplace_back(x, half_width, z);
  }
  for (int k = 0; k + 1 < static_cast<int>(profile.size()); ++k) {
    const int a = 2 * k;
    triangles.push_back({a, a + 2, a + 3});
    triangles.push_back({a, a + 3, a + 1});
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

// Flat until x = 0, trench 3 mm deep from x = 2 mm to 12 mm, back up at 14 mm,
// crest at 15 mm, then a 45 degree fall. With p_init at the origin, d = +x and
// l_e = 5 mm, elements mid+1 and mid+2 hang over the trench and mid+3 sits on
// the crest.
inline SurfaceMesh trench_mesh() {
  const double mm = 1e-3;
  return extruded_profile({{-100 * mm, 0.0},
                           {0.0, 0.0},
                           {2 * mm, -3 * mm},
                           {12 * mm, -3 * mm},
                           {14 * mm, 0.0},
                           {15 * mm, 0.0},
                           {100 * mm, -85 * mm}},
                          20 * mm);
}

// A 2 mm cube: a 5 mm element swinging about a pivot on its top face never
// comes within 1 mm of it.
inline SurfaceMesh overhang_cube() { return box_mesh(Vec3(-1e-3, -1e-3, -1e-3), Vec3(1e-3, 1e-3, 1e-3)); }

inline SurfaceMesh leg_mesh(int resolution = 16) {
  MeshSpec spec;
  spec.kind = MeshKind::kCylinder;
  spec.radius = 0.05;
  spec.length = 0.4;
  spec.resolution = resolution;
  return generate_mesh(spec);
}

inline SurfaceMesh plane_mesh() {
  MeshSpec spec;
  spec.kind = MeshKind::kPlane;
  return generate_mesh(spec);
}

inline SurfaceMesh hip_mesh() {
  MeshSpec spec;
  spec.kind = MeshKind::kHemisphere;
  spec.radius = 0.15;
  return generate_mesh(spec);
}

inline SurfaceMesh heel_mesh() {
  MeshSpec spec;
  spec.kind = MeshKind::kHeelComposite;
  return generate_mesh(spec);
}

// Per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("tapewrap_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tapewrap::test
