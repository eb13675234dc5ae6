#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tapewrap/geometry.hpp"

namespace tapewrap {

enum class MeshKind { kPlane, kCylinder, kHemisphere, kHeelComposite };

std::string_view mesh_kind_name(MeshKind kind);
/// Accepts "plane", "cylinder", "hemisphere", "heel_composite" (also "heel").
MeshKind parse_mesh_kind(std::string_view name);

// Parametric anatomy stand-ins. Only the fields of the chosen kind are read.
// Defaults: leg cylinder r = 0.05 m, hip hemisphere r = 0.15 m.
struct MeshSpec {
  MeshKind kind = MeshKind::kCylinder;
  double width = 0.3;   // plane, along x
  double depth = 0.3;   // plane, along y
  double radius = 0.05;  // cylinder (axis z) and hemisphere (dome +z)
  double length = 0.4;   // cylinder
  double heel_radius = 0.04;
  double sole_length = 0.2;
  double ankle_radius = 0.035;
  int resolution = 16;  // facets per curved quarter-turn; cells per side for plane

  /// Throws Error(kInvalidSpec) naming the first invalid dimension.
  void validate() const;
};

/// Builds the stand-in surface. Closed kinds are passed through convex_hull;
/// the plane is an open grid patch with normals +z, centered at the origin.
SurfaceMesh generate_mesh(const MeshSpec& spec);

enum class ConvexifyMode {
  kIfNeeded,  // keep the file's triangulation when it already passes the convexity audit
  kAlways,
  kNever,     // concave planning keeps the raw surface
};

struct LoadOptions {
  double scale = 1.0;
  ConvexifyMode convexify = ConvexifyMode::kIfNeeded;
};

/// Reads ASCII OBJ (`v`/`f` lines) or binary STL, chosen by extension.
/// Throws kFileNotFound, kFormatError, kInvalidMesh.
SurfaceMesh load_mesh(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes OBJ (default) or binary STL when the extension is `.stl`.
/// Throws kIoError.
void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path);

// Format-level entry points; no validation beyond parsing.
SurfaceMesh parse_obj(std::string_view text, double scale = 1.0);
SurfaceMesh parse_stl_binary(std::string_view bytes, double scale = 1.0);
std::string format_obj(const SurfaceMesh& mesh);
std::string format_stl_binary(const SurfaceMesh& mesh);

}  // namespace tapewrap
