#pragma once

#include <vector>

#include "tapewrap/geometry.hpp"

namespace tapewrap {

enum class Side { kStart, kEnd };

// One discrete tape segment. Once `attached` is set its pose is frozen.
struct TapeElement {
  Vec3 position = Vec3::Zero();
  Rot3 orientation = Rot3::Identity();
  bool attached = false;
  Vec3 initial_position = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // surface normal at attachment; zero while free
};

// The whole element chain. Elements in [front_start, front_end] are attached;
// everything outside that run is free and rigid about the side's pivot.
struct TapeState {
  std::vector<TapeElement> elements;
  int mid = 0;
  int front_start = 0;
  int front_end = 0;
  Rot3 start_rotation = Rot3::Identity();  // accumulated, start side
  Rot3 end_rotation = Rot3::Identity();    // accumulated, end side
  Vec3 start_axis = Vec3::Zero();
  Vec3 end_axis = Vec3::Zero();
  // Last element whose normal has been folded into each side's axis.
  int start_axis_front = 0;
  int end_axis_front = 0;
  Vec3 direction = Vec3::Zero();  // taping direction of the initial layout
  double element_length = 0.0;
  double tape_length = 0.0;
  double tape_width = 0.025;  // ribbon export only

  int size() const { return static_cast<int>(elements.size()); }
  const Vec3& position(int j) const { return elements[static_cast<std::size_t>(j)].position; }

  int front(Side side) const { return side == Side::kStart ? front_start : front_end; }
  int tail(Side side) const { return side == Side::kStart ? 0 : size() - 1; }
  bool side_complete(Side side) const { return front(side) == tail(side); }
  int free_count(Side side) const { return side == Side::kStart ? front_start : size() - 1 - front_end; }
  const Rot3& rotation(Side side) const { return side == Side::kStart ? start_rotation : end_rotation; }
  const Vec3& axis(Side side) const { return side == Side::kStart ? start_axis : end_axis; }
};

struct AdhesionParams {
  double epsilon = 1e-3;
  bool penetration_counts_as_contact = true;
};

/// ||p_j - p_{j-1}|| - l_e for joint j in [1, N-1]. Throws kIndexError.
double c_length(const TapeState& state, int j);

/// Chord from pivot to tail minus the summed link lengths over the free run
/// (pivot link included). Never positive; zero iff the free run is straight.
/// Throws kNoFreeSegment when the side is fully attached.
double c_tension(const TapeState& state, Side side);

/// axis . pivot_normal. Throws kInvalidVector unless both are unit.
double c_wrinkle(const Vec3& axis, const Vec3& pivot_normal);

bool is_adhered(const Vec3& p, const SurfaceMesh& mesh, const AdhesionParams& params);

/// Same predicate on an already computed surface query.
inline bool is_adhered(const SurfacePoint& q, const AdhesionParams& params) {
  return std::abs(q.signed_distance) < params.epsilon ||
         (params.penetration_counts_as_contact && q.signed_distance <= 0.0);
}

}  // namespace tapewrap
