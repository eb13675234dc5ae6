#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tapewrap/planner.hpp"

namespace tapewrap {

// Trajectory file: one JSON document holding the planning inputs, one record
// per iteration ({"i", "start": {"p", "q"}, "end", "tension_start",
// "tension_end", "front_start", "front_end"}) and the final element chain.
// Rotations are unit quaternions (w, x, y, z) with w >= 0.

struct TrajectoryMeta {
  std::optional<std::string> timestamp;  // excluded from the data payload
};

std::string plan_to_json(const PlacementPlan& plan, const TrajectoryMeta& meta = {});

/// Throws Error(kFormatError).
PlacementPlan plan_from_json(std::string_view text);

/// Throws Error(kIoError).
void save_trajectory(const PlacementPlan& plan, const std::filesystem::path& path, const TrajectoryMeta& meta = {});

/// Throws Error(kFileNotFound), Error(kFormatError).
PlacementPlan load_trajectory(const std::filesystem::path& path);

Eigen::Vector4d rotation_to_quaternion(const Rot3& rotation);
Rot3 quaternion_to_rotation(const Eigen::Vector4d& wxyz);

}  // namespace tapewrap
