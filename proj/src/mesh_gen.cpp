#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tapewrap/error.hpp"
#include "tapewrap/mesh_io.hpp"

namespace tapewrap {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be > 0 (got " << value << ")";
    throw Error(ErrorCode::kInvalidSpec, msg.str());
  }
}

SurfaceMesh make_plane(const MeshSpec& spec) {
  const int cells = spec.resolution;
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>((cells + 1) * (cells + 1)));
  for (int j = 0; j <= cells; ++j) {
    for (int i = 0; i <= cells; ++i) {
      vertices.emplace_back(-0.5 * spec.width + spec.width * i / cells,
                            -0.5 * spec.depth + spec.depth * j / cells, 0.0);
    }
  }
  std::vector<Triangle> triangles;
  auto at = [cells](int i, int j) { return j * (cells + 1) + i; };
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

void append_ring(std::vector<Vec3>& points, double radius, double z, int segments) {
  for (int k = 0; k < segments; ++k) {
    const double a = 2.0 * kPi * k / segments;
    points.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
  }
}

std::vector<Vec3> cylinder_points(const MeshSpec& spec) {
  std::vector<Vec3> points;
  const int segments = 4 * spec.resolution;
  append_ring(points, spec.radius, -0.5 * spec.length, segments);
  append_ring(points, spec.radius, 0.5 * spec.length, segments);
  return points;
}

std::vector<Vec3> hemisphere_points(const MeshSpec& spec) {
  std::vector<Vec3> points;
  const int segments = 4 * spec.resolution;
  points.emplace_back(0.0, 0.0, spec.radius);
  for (int ring = 1; ring <= spec.resolution; ++ring) {
    const double polar = 0.5 * kPi * ring / spec.resolution;
    append_ring(points, spec.radius * std::sin(polar), spec.radius * std::cos(polar), segments);
  }
  return points;
}

// Foot along +x with the sole on z = 0. The heel is a quarter-cylinder about
// the y axis line (x = 0, z = R_h) covering the back-bottom quadrant; the
// ankle is a vertical cylinder rising from the heel top.
std::vector<Vec3> heel_points(const MeshSpec& spec) {
  const double rh = spec.heel_radius;
  const double half_width = rh;
  std::vector<Vec3> points;
  for (int k = 0; k <= spec.resolution; ++k) {
    const double a = kPi + 0.5 * kPi * k / spec.resolution;
    for (double y : {-half_width, half_width}) {
      points.emplace_back(rh * std::cos(a), y, rh + rh * std::sin(a));
    }
  }
  for (double x : {0.0, spec.sole_length}) {
    for (double y : {-half_width, half_width}) {
      for (double z : {0.0, rh}) points.emplace_back(x, y, z);
    }
  }
  const int segments = 4 * spec.resolution;
  append_ring(points, spec.ankle_radius, rh, segments);
  append_ring(points, spec.ankle_radius, 3.0 * rh, segments);
  return points;
}

}  // namespace

std::string_view mesh_kind_name(MeshKind kind) {
  switch (kind) {
    case MeshKind::kPlane: return "plane";
    case MeshKind::kCylinder: return "cylinder";
    case MeshKind::kHemisphere: return "hemisphere";
    case MeshKind::kHeelComposite: return "heel_composite";
  }
  return "unknown";
}

MeshKind parse_mesh_kind(std::string_view name) {
  if (name == "plane") return MeshKind::kPlane;
  if (name == "cylinder" || name == "leg") return MeshKind::kCylinder;
  if (name == "hemisphere" || name == "hip") return MeshKind::kHemisphere;
  if (name == "heel_composite" || name == "heel") return MeshKind::kHeelComposite;
  throw Error(ErrorCode::kInvalidSpec, "unknown mesh kind '" + std::string(name) + "'");
}

void MeshSpec::validate() const {
  switch (kind) {
    case MeshKind::kPlane:
      require_positive(width, "width");
      require_positive(depth, "depth");
      break;
    case MeshKind::kCylinder:
      require_positive(radius, "radius");
      require_positive(length, "length");
      break;
    case MeshKind::kHemisphere:
      require_positive(radius, "radius");
      break;
    case MeshKind::kHeelComposite:
      require_positive(heel_radius, "heel-radius");
      require_positive(sole_length, "sole-length");
      require_positive(ankle_radius, "ankle-radius");
      break;
  }
  if (resolution < 4) {
    throw Error(ErrorCode::kInvalidSpec, "resolution must be >= 4 (got " + std::to_string(resolution) + ")");
  }
}

SurfaceMesh generate_mesh(const MeshSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case MeshKind::kPlane: return make_plane(spec);
    case MeshKind::kCylinder: return convex_hull(cylinder_points(spec));
    case MeshKind::kHemisphere: return convex_hull(hemisphere_points(spec));
    case MeshKind::kHeelComposite: return convex_hull(heel_points(spec));
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown mesh kind");
}

}  // namespace tapewrap
