#pragma once

#include <filesystem>
#include <string>

#include "tapewrap/geometry.hpp"
#include "tapewrap/planner.hpp"

namespace tapewrap {

struct SceneOptions {
  double tape_width = 0.025;
  int snapshot_stride = 0;  // 0 disables free-segment snapshots
};

struct SceneSummary {
  bool ribbon_written = false;
  int ribbon_quads = 0;
  int snapshots = 0;
};

/// OBJ text with the surface, a ribbon along the attached centerline (offset
/// by +/- width/2 along t x n) and optional free-segment polylines.
std::string format_scene_obj(const SurfaceMesh& mesh, const PlacementPlan& plan, const SceneOptions& options,
                             SceneSummary* summary = nullptr);

/// Throws Error(kIoError).
SceneSummary export_scene(const SurfaceMesh& mesh, const PlacementPlan& plan, const SceneOptions& options,
                          const std::filesystem::path& path);

}  // namespace tapewrap
