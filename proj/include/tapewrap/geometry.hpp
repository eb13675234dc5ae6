#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tapewrap {

// Positions are meters; directions and normals are dimensionless unit vectors.
using Vec3 = Eigen::Vector3d;
using Rot3 = Eigen::Matrix3d;
using Triangle = std::array<int, 3>;

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kMinTriangleArea = 1e-12;
inline constexpr double kHullPlaneEpsilon = 1e-10;
inline constexpr double kConvexityTolerance = 1e-7;

inline bool is_unit(const Vec3& v, double tol = kUnitTolerance) {
  return std::abs(v.norm() - 1.0) <= tol;
}

/// Rotation by `angle` radians about the unit `axis`.
/// Throws Error(kInvalidAxis) when |axis| deviates from 1 by more than 1e-9.
Rot3 rodrigues(const Vec3& axis, double angle);

struct AxisAngle {
  Vec3 axis;
  double angle;
};

/// Inverse of rodrigues for angles in [0, pi). The axis is undefined (returned
/// as zero) for the identity.
AxisAngle axis_angle_of(const Rot3& rotation);

/// max |R^T R - I| elementwise and |det R - 1|, whichever is larger.
double rotation_defect(const Rot3& rotation);

/// Closest point of the closed triangle (a, b, c) to p.
/// Throws Error(kDegenerateTriangle) if the triangle area is <= 1e-12 m^2.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Immutable after construction. Face normals follow the counter-clockwise
// winding of each triangle.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /// Validates indices and face areas; throws Error(kInvalidMesh) naming the
  /// offending faces.
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vec3>& normals() const { return normals_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  bool empty() const { return triangles_.empty(); }

  const Vec3& corner(std::size_t face, int k) const { return vertices_[triangles_[face][k]]; }

  /// Signed distance of p to the plane of `face`, positive on the normal side.
  double plane_distance(std::size_t face, const Vec3& p) const {
    return normals_[face].dot(p) - offsets_[face];
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<double> offsets_;
};

struct SurfacePoint {
  Vec3 position;
  Vec3 normal;
  int face = -1;
  // Negative when the query lies inside the hull (inner side of every face plane).
  double signed_distance = 0.0;
};

/// Globally nearest surface point. Faces sharing the nearest point (within
/// 1e-12 m) are ranked by the query's plane distance, then by lowest face
/// index. Uses the OpenMP kernel above kParallelTriangleThreshold triangles; the result is
/// identical to the serial scan either way.
SurfacePoint closest_point_on_surface(const SurfaceMesh& mesh, const Vec3& p);

inline constexpr std::size_t kParallelTriangleThreshold = 4096;

// Reference and parallel kernels, exposed for tests and benchmarks.
SurfacePoint closest_point_on_surface_serial(const SurfaceMesh& mesh, const Vec3& p);
SurfacePoint closest_point_on_surface_parallel(const SurfaceMesh& mesh, const Vec3& p);

/// Largest signed distance of any vertex above any face plane. A convex mesh
/// with outward normals gives a value <= kConvexityTolerance.
double convexity_violation(const SurfaceMesh& mesh);
double convexity_violation_serial(const SurfaceMesh& mesh);
double convexity_violation_parallel(const SurfaceMesh& mesh);

/// Convex hull of the points, triangulated with normals facing away from the
/// hull centroid. Only hull vertices are kept, in input order.
/// Throws Error(kDegenerateHull) for fewer than 4 points or coplanar input.
SurfaceMesh convex_hull(std::span<const Vec3> points);

inline SurfaceMesh convexify(const SurfaceMesh& mesh) { return convex_hull(mesh.vertices()); }

}  // namespace tapewrap
