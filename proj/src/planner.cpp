#include "tapewrap/planner.hpp"

#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "tapewrap/error.hpp"

namespace tapewrap {

namespace {

constexpr double kParallelNormalThreshold = 1e-9;
constexpr double kMinTangentNorm = 1e-6;

// Mutable per-side view over TapeState so the start side can mirror the end
// side with `step` = -1.
struct SideView {
  int& front;
  Rot3& rotation;
  Vec3& axis;
  int& axis_front;
  int tail;
  int step;
};

SideView view(TapeState& state, Side side) {
  if (side == Side::kStart) {
    return {state.front_start, state.start_rotation, state.start_axis, state.start_axis_front, 0, -1};
  }
  return {state.front_end, state.end_rotation, state.end_axis, state.end_axis_front, state.size() - 1, 1};
}

TapeElement& element(TapeState& state, int j) { return state.elements[static_cast<std::size_t>(j)]; }

// The stored normal is re-queried at the projected position so that anyone
// recomputing it from the attached position gets the same face.
void attach(TapeElement& e, const SurfaceMesh& mesh, const SurfacePoint& q, const Rot3& rotation) {
  e.position = q.position;
  e.normal = closest_point_on_surface(mesh, q.position).normal;
  e.orientation = rotation;
  e.attached = true;
}

// Folds the normals of every element attached since the last update into the
// rotation axis: v_k = n_{k-1} x n_k when the normals are not parallel, else
// v_{k-1}. The result is re-projected onto the pivot's tangent plane.
void update_axis(TapeState& state, SideView& s) {
  for (int k = s.axis_front + s.step; k != s.front + s.step; k += s.step) {
    const Vec3& n_prev = element(state, k - s.step).normal;
    const Vec3& n_curr = element(state, k).normal;
    const Vec3 cross = n_prev.cross(n_curr);
    if (cross.norm() >= kParallelNormalThreshold) s.axis = cross.normalized();
  }
  s.axis_front = s.front;
  const Vec3& n_pivot = element(state, s.front).normal;
  s.axis = (s.axis - s.axis.dot(n_pivot) * n_pivot).normalized();
}

void rotate(TapeState& state, const PlannerConfig& config, SideView& s) {
  if (s.front != state.mid) update_axis(state, s);
  s.rotation = rodrigues(s.axis, config.angle_step) * s.rotation;
}

Vec3 tension_direction(const TapeState& state, Side side) {
  if (state.side_complete(side)) return Vec3::Zero();
  return (state.position(state.tail(side)) - state.position(state.front(side))).normalized();
}

PlanRecord make_record(const TapeState& state, int iteration) {
  PlanRecord r;
  r.iteration = iteration;
  r.start = {state.position(0), state.start_rotation};
  r.end = {state.position(state.size() - 1), state.end_rotation};
  r.tension_start = tension_direction(state, Side::kStart);
  r.tension_end = tension_direction(state, Side::kEnd);
  r.front_start = state.front_start;
  r.front_end = state.front_end;
  return r;
}

PlacementPlan run_plan(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init, double tape_length,
                       const PlannerConfig& config, Anchor anchor) {
  PlacementPlan plan;
  plan.config = config;
  plan.anchor = anchor;
  TapeState state = initialize_tape(mesh, p_init, d_init, tape_length, config, anchor);
  plan.anchor_point = state.position(state.mid);
  plan.direction = state.direction;

  const auto step = config.concave_mode ? step_side_concave : step_side;
  const int limit = config.iteration_limit(state.size());
  plan.status = PlanStatus::kComplete;
  while (!state.side_complete(Side::kStart) || !state.side_complete(Side::kEnd)) {
    if (plan.iterations >= limit) {
      plan.status = PlanStatus::kMaxIterationsExceeded;
      spdlog::warn("planner stopped after {} iterations with fronts ({}, {}) of {} elements", plan.iterations,
                   state.front_start, state.front_end, state.size());
      break;
    }
    step(state, mesh, config, Side::kEnd);
    step(state, mesh, config, Side::kStart);
    ++plan.iterations;
    plan.records.push_back(make_record(state, plan.iterations));
  }
  plan.final_state = std::move(state);
  return plan;
}

}  // namespace

std::string_view plan_status_name(PlanStatus status) {
  return status == PlanStatus::kComplete ? "complete" : "max_iterations_exceeded";
}

PlanStatus parse_plan_status(std::string_view name) {
  if (name == "complete") return PlanStatus::kComplete;
  if (name == "max_iterations_exceeded") return PlanStatus::kMaxIterationsExceeded;
  throw Error(ErrorCode::kFormatError, "unknown plan status '" + std::string(name) + "'");
}

void PlannerConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(element_length > 0.0 && std::isfinite(element_length), "element length must be > 0");
  require(angle_step > 0.0 && angle_step < std::numbers::pi, "angle step must be in (0, pi)");
  require(epsilon > 0.0 && std::isfinite(epsilon), "adhesion threshold must be > 0");
  require(residual_distance >= 0.0 && std::isfinite(residual_distance), "residual distance must be >= 0");
  require(max_iterations >= 0, "max iterations must be > 0 (or 0 for automatic)");
  require(tape_width > 0.0, "tape width must be > 0");
  if (angle_step * element_length > epsilon && !penetration_counts_as_contact) {
    spdlog::warn("angle step * element length = {:.3g} m exceeds epsilon = {:.3g} m with penetration contact off; "
                 "elements may step over the adhesion band",
                 angle_step * element_length, epsilon);
  }
}

int PlannerConfig::iteration_limit(int element_count) const {
  if (max_iterations > 0) return max_iterations;
  return element_count * static_cast<int>(std::ceil(2.0 * std::numbers::pi / angle_step));
}

std::pair<Vec3, Vec3> initial_axis(const SurfaceMesh& mesh, const Vec3& p_mid, const Vec3& d_init) {
  const Vec3 n = closest_point_on_surface(mesh, p_mid).normal;
  const Vec3 cross = n.cross(d_init);
  if (cross.norm() < kMinTangentNorm) {
    throw Error(ErrorCode::kInvalidDirection, "taping direction is parallel to the surface normal");
  }
  const Vec3 end_axis = cross.normalized();
  return {-end_axis, end_axis};
}

TapeState initialize_tape(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init, double tape_length,
                          const PlannerConfig& config, Anchor anchor) {
  config.validate();
  if (!(tape_length >= 3.0 * config.element_length)) {
    throw Error(ErrorCode::kTapeTooShort, "tape length " + std::to_string(tape_length) +
                                              " m is shorter than three elements");
  }
  if (!d_init.allFinite() || d_init.norm() == 0.0) {
    throw Error(ErrorCode::kInvalidDirection, "initial direction must be a nonzero vector");
  }

  const SurfacePoint snapped = closest_point_on_surface(mesh, p_init);
  const Vec3 normal = closest_point_on_surface(mesh, snapped.position).normal;
  const Vec3 d_unit = d_init.normalized();
  const Vec3 tangent = d_unit - d_unit.dot(normal) * normal;
  if (tangent.norm() < kMinTangentNorm) {
    throw Error(ErrorCode::kInvalidDirection, "initial direction is parallel to the surface normal");
  }
  const Vec3 direction = tangent.normalized();

  TapeState state;
  const int n = static_cast<int>(std::lround(tape_length / config.element_length));
  state.direction = direction;
  state.element_length = config.element_length;
  state.tape_length = tape_length;
  state.tape_width = config.tape_width;
  state.mid = anchor == Anchor::kMiddle ? n / 2 : 0;
  state.elements.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    TapeElement& e = element(state, j);
    e.initial_position = layout_position(snapped.position, direction, j, state.mid, config.element_length);
    e.position = e.initial_position;
  }
  attach(element(state, state.mid), mesh, snapped, Rot3::Identity());

  state.front_start = state.front_end = state.mid;
  state.start_axis_front = state.end_axis_front = state.mid;
  std::tie(state.start_axis, state.end_axis) = initial_axis(mesh, snapped.position, direction);
  return state;
}

void refresh_free_segment(TapeState& state, Side side) {
  SideView s = view(state, side);
  if (s.front == s.tail) return;
  const Vec3 pivot = state.position(s.front);
  const Vec3 pivot_init = element(state, s.front).initial_position;
  for (int j = s.front + s.step; j != s.tail + s.step; j += s.step) {
    TapeElement& e = element(state, j);
    e.position = pivot + s.rotation * (e.initial_position - pivot_init);
    e.orientation = s.rotation;
  }
}

StepResult step_side(TapeState& state, const SurfaceMesh& mesh, const PlannerConfig& config, Side side) {
  SideView s = view(state, side);
  if (s.front == s.tail) return StepResult::kDone;
  refresh_free_segment(state, side);

  const int next = s.front + s.step;
  const SurfacePoint q = closest_point_on_surface(mesh, state.position(next));
  StepResult result = StepResult::kRotated;
  if (is_adhered(q, config.adhesion())) {
    attach(element(state, next), mesh, q, s.rotation);
    s.front = next;
    result = StepResult::kAdvanced;
  } else {
    rotate(state, config, s);
  }
  refresh_free_segment(state, side);
  return result;
}

StepResult step_side_concave(TapeState& state, const SurfaceMesh& mesh, const PlannerConfig& config, Side side) {
  SideView s = view(state, side);
  if (s.front == s.tail) return StepResult::kDone;
  refresh_free_segment(state, side);

  const AdhesionParams adhesion = config.adhesion();
  const int next = s.front + s.step;
  int contact = -1;
  if (is_adhered(closest_point_on_surface(mesh, state.position(next)), adhesion)) {
    contact = next;
  } else {
    for (int j = s.tail; j != next; j -= s.step) {
      if (is_adhered(closest_point_on_surface(mesh, state.position(j)), adhesion)) {
        contact = j;
        break;
      }
    }
  }

  StepResult result = StepResult::kRotated;
  if (contact >= 0) {
    for (int j = next; j != contact + s.step; j += s.step) {
      attach(element(state, j), mesh, closest_point_on_surface(mesh, state.position(j)), s.rotation);
    }
    s.front = contact;
    result = StepResult::kAdvanced;
  } else {
    rotate(state, config, s);
  }
  refresh_free_segment(state, side);
  return result;
}

PlacementPlan plan_bimanual(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init, double tape_length,
                            const PlannerConfig& config) {
  return run_plan(mesh, p_init, d_init, tape_length, config, Anchor::kMiddle);
}

PlacementPlan plan_single_sided(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init,
                                double tape_length, const PlannerConfig& config) {
  return run_plan(mesh, p_init, d_init, tape_length, config, Anchor::kStart);
}

PlacementPlan apply_residual(const PlacementPlan& plan, const PlannerConfig& config) {
  if (!(config.residual_distance >= 0.0) || !std::isfinite(config.residual_distance)) {
    throw Error(ErrorCode::kInvalidConfig, "residual distance must be >= 0");
  }
  PlacementPlan out = plan;
  const double d = config.residual_distance;
  if (d == 0.0) return out;
  for (PlanRecord& r : out.records) {
    r.start.position += d * r.tension_start;
    r.end.position += d * r.tension_end;
  }
  out.residual_applied += d;
  return out;
}

}  // namespace tapewrap
