#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

#include "tapewrap/error.hpp"
#include "tapewrap/geometry.hpp"

namespace tapewrap {

namespace {

// Faces count as tied when their distances and closest points agree to this.
constexpr double kTieTolerance = 1e-12;

struct FaceHit {
  double dist2;
  Vec3 position;
};

FaceHit scan_face(const SurfaceMesh& mesh, std::size_t f, const Vec3& p) {
  const Vec3 q = closest_point_on_triangle(p, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2));
  return {(q - p).squaredNorm(), q};
}

// Among tied faces, prefer the one whose plane p lies furthest
// outside (keeps the normal outward consistent at edges and vertices), then
// the lowest index. Runs in index order so the result does not depend on
// how the scan was scheduled.
SurfacePoint resolve(const SurfaceMesh& mesh, const Vec3& p, const std::vector<FaceHit>& hits, bool inside) {
  std::size_t nearest = 0;
  for (std::size_t f = 1; f < hits.size(); ++f) {
    if (hits[f].dist2 < hits[nearest].dist2) nearest = f;
  }
  const double d_min = std::sqrt(hits[nearest].dist2);

  std::size_t face = hits.size();
  double best_plane = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < hits.size(); ++f) {
    if (std::sqrt(hits[f].dist2) - d_min > kTieTolerance) continue;
    if ((hits[f].position - hits[nearest].position).norm() > kTieTolerance) continue;
    const double plane = mesh.plane_distance(f, p);
    if (face == hits.size() || plane > best_plane + kTieTolerance) {
      face = f;
      best_plane = plane;
    }
  }

  SurfacePoint out;
  out.position = hits[face].position;
  out.face = static_cast<int>(face);
  out.normal = mesh.normals()[face];
  const double d = std::sqrt(hits[face].dist2);
  out.signed_distance = (inside && d > 0.0) ? -d : d;
  return out;
}

void require_nonempty(const SurfaceMesh& mesh) {
  if (mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "closest-point query on a mesh without triangles");
}

}  // namespace

SurfacePoint closest_point_on_surface_serial(const SurfaceMesh& mesh, const Vec3& p) {
  require_nonempty(mesh);
  std::vector<FaceHit> hits;
  hits.reserve(mesh.triangle_count());
  bool inside = true;
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    hits.push_back(scan_face(mesh, f, p));
    if (mesh.plane_distance(f, p) > 0.0) inside = false;
  }
  return resolve(mesh, p, hits, inside);
}

SurfacePoint closest_point_on_surface_parallel(const SurfaceMesh& mesh, const Vec3& p) {
  require_nonempty(mesh);
  const auto count = static_cast<std::ptrdiff_t>(mesh.triangle_count());
  std::vector<FaceHit> hits(mesh.triangle_count());
  bool inside = true;
#pragma omp parallel for schedule(static) reduction(&& : inside)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    const auto face = static_cast<std::size_t>(f);
    hits[face] = scan_face(mesh, face, p);
    inside = inside && mesh.plane_distance(face, p) <= 0.0;
  }
  return resolve(mesh, p, hits, inside);
}

SurfacePoint closest_point_on_surface(const SurfaceMesh& mesh, const Vec3& p) {
  if (mesh.triangle_count() >= kParallelTriangleThreshold) {
    return closest_point_on_surface_parallel(mesh, p);
  }
  return closest_point_on_surface_serial(mesh, p);
}

double convexity_violation_serial(const SurfaceMesh& mesh) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    for (const Vec3& v : mesh.vertices()) worst = std::max(worst, mesh.plane_distance(f, v));
  }
  return worst;
}

double convexity_violation_parallel(const SurfaceMesh& mesh) {
  const auto count = static_cast<std::ptrdiff_t>(mesh.triangle_count());
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    for (const Vec3& v : mesh.vertices()) {
      worst = std::max(worst, mesh.plane_distance(static_cast<std::size_t>(f), v));
    }
  }
  return worst;
}

double convexity_violation(const SurfaceMesh& mesh) {
  if (mesh.triangle_count() * mesh.vertex_count() >= kParallelTriangleThreshold * 64) {
    return convexity_violation_parallel(mesh);
  }
  return convexity_violation_serial(mesh);
}

}  // namespace tapewrap
