#include "tapewrap/tape_model.hpp"

#include "tapewrap/error.hpp"

namespace tapewrap {

double c_length(const TapeState& state, int j) {
  if (j < 1 || j >= state.size()) {
    throw Error(ErrorCode::kIndexError,
                "joint " + std::to_string(j) + " outside [1, " + std::to_string(state.size() - 1) + "]");
  }
  return (state.position(j) - state.position(j - 1)).norm() - state.element_length;
}

double c_tension(const TapeState& state, Side side) {
  if (state.side_complete(side)) {
    throw Error(ErrorCode::kNoFreeSegment, side == Side::kStart ? "start side fully attached" : "end side fully attached");
  }
  const int pivot = state.front(side);
  const int tail = state.tail(side);
  const int step = side == Side::kStart ? -1 : 1;
  double path = 0.0;
  for (int k = pivot + step; k != tail + step; k += step) {
    path += (state.position(k) - state.position(k - step)).norm();
  }
  return (state.position(tail) - state.position(pivot)).norm() - path;
}

double c_wrinkle(const Vec3& axis, const Vec3& pivot_normal) {
  if (!is_unit(axis) || !is_unit(pivot_normal)) {
    throw Error(ErrorCode::kInvalidVector, "wrinkle residual needs unit axis and normal");
  }
  return axis.dot(pivot_normal);
}

bool is_adhered(const Vec3& p, const SurfaceMesh& mesh, const AdhesionParams& params) {
  return is_adhered(closest_point_on_surface(mesh, p), params);
}

}  // namespace tapewrap
