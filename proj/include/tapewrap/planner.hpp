#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "tapewrap/geometry.hpp"
#include "tapewrap/tape_model.hpp"

namespace tapewrap {

inline constexpr double kDegreesToRadians = 0.017453292519943295;

struct PlannerConfig {
  double element_length = 0.005;
  double angle_step = 0.5 * kDegreesToRadians;
  double epsilon = 1e-3;
  double residual_distance = 0.003;
  int max_iterations = 0;  // 0 selects N * ceil(2*pi / angle_step)
  bool concave_mode = false;
  bool penetration_counts_as_contact = true;
  double tape_width = 0.025;

  /// Throws Error(kInvalidConfig). Logs a warning when a single angle step can
  /// carry an element across the adhesion band and penetration is not contact.
  void validate() const;

  AdhesionParams adhesion() const { return {epsilon, penetration_counts_as_contact}; }

  /// Iteration guard for a tape of `element_count` elements.
  int iteration_limit(int element_count) const;
};

// Where the initial adhesion point sits along the tape.
enum class Anchor {
  kMiddle,  // bimanual: both ends are free
  kStart,   // single-sided: element 0 is pinned
};

/// Straight-line layout position of element j through `anchor_point`.
inline Vec3 layout_position(const Vec3& anchor_point, const Vec3& direction, int j, int anchor_index,
                            double element_length) {
  return anchor_point + (static_cast<double>(j - anchor_index) * element_length) * direction;
}

struct EndEffectorPose {
  Vec3 position = Vec3::Zero();
  Rot3 rotation = Rot3::Identity();
};

struct PlanRecord {
  int iteration = 0;
  EndEffectorPose start;
  EndEffectorPose end;
  Vec3 tension_start = Vec3::Zero();  // zero once the side is fully attached
  Vec3 tension_end = Vec3::Zero();
  int front_start = 0;
  int front_end = 0;
};

enum class PlanStatus { kComplete, kMaxIterationsExceeded };

std::string_view plan_status_name(PlanStatus status);
/// Throws Error(kFormatError) for an unknown name.
PlanStatus parse_plan_status(std::string_view name);

struct PlacementPlan {
  std::vector<PlanRecord> records;
  TapeState final_state;
  int iterations = 0;
  PlanStatus status = PlanStatus::kComplete;

  // Inputs needed to replay the plan independently.
  PlannerConfig config;
  Vec3 anchor_point = Vec3::Zero();  // initial adhesion point after snapping
  Vec3 direction = Vec3::Zero();     // taping direction after tangent projection
  Anchor anchor = Anchor::kMiddle;
  double residual_applied = 0.0;     // offset already added to recorded positions
};

enum class StepResult { kAdvanced, kRotated, kDone };

/// Lays out N = round(l / l_e) collinear elements through the snapped initial
/// point along the tangent-projected direction.
/// Throws kTapeTooShort, kInvalidDirection, kInvalidConfig, kEmptyMesh.
TapeState initialize_tape(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init, double tape_length,
                          const PlannerConfig& config, Anchor anchor = Anchor::kMiddle);

/// (start axis, end axis): end = normalize(n x d), start = -end.
std::pair<Vec3, Vec3> initial_axis(const SurfaceMesh& mesh, const Vec3& p_mid, const Vec3& d_init);

/// Places the free elements of `side` rigidly about its pivot using the
/// side's accumulated rotation.
void refresh_free_segment(TapeState& state, Side side);

/// One side's iteration: attach the next element if it is within the adhesion
/// band, otherwise rotate the free segment by one angle step.
StepResult step_side(TapeState& state, const SurfaceMesh& mesh, const PlannerConfig& config, Side side);

/// Concave variant: when the next element is not in contact but a farther one
/// is, the front jumps to the farthest contacting element and every skipped
/// element is projected onto the surface.
StepResult step_side_concave(TapeState& state, const SurfaceMesh& mesh, const PlannerConfig& config, Side side);

PlacementPlan plan_bimanual(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init, double tape_length,
                            const PlannerConfig& config);

/// Element 0 is pinned at the initial point; only the end side advances.
PlacementPlan plan_single_sided(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init,
                                double tape_length, const PlannerConfig& config);

/// Offsets every recorded position by residual_distance along that record's
/// tension direction. Zero-sentinel records are unchanged.
/// Throws kInvalidConfig for a negative distance.
PlacementPlan apply_residual(const PlacementPlan& plan, const PlannerConfig& config);

}  // namespace tapewrap
