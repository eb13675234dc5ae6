#include "tapewrap/scene_export.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <spdlog/spdlog.h>

#include "tapewrap/error.hpp"

namespace tapewrap {

namespace {

void write_vertex(std::ostream& out, const Vec3& v) {
  out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
}

Vec3 free_position(const PlacementPlan& plan, const Rot3& rotation, int front, int j) {
  const TapeState& s = plan.final_state;
  const Vec3 offset = layout_position(plan.anchor_point, plan.direction, j, s.mid, s.element_length) -
                      layout_position(plan.anchor_point, plan.direction, front, s.mid, s.element_length);
  return s.position(front) + rotation * offset;
}

}  // namespace

std::string format_scene_obj(const SurfaceMesh& mesh, const PlacementPlan& plan, const SceneOptions& options,
                             SceneSummary* summary) {
  SceneSummary result;
  std::ostringstream out;
  out << std::setprecision(12);
  out << "# tapewrap scene\n";

  out << "o surface\n";
  for (const Vec3& v : mesh.vertices()) write_vertex(out, v);
  for (const Triangle& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  long next_index = static_cast<long>(mesh.vertices().size()) + 1;

  const TapeState& s = plan.final_state;
  const int lo = s.front_start;
  const int hi = s.front_end;
  if (hi - lo + 1 < 2) {
    spdlog::warn("fewer than two attached elements; exporting the surface only");
  } else {
    out << "o tape_ribbon\n";
    const double half = 0.5 * options.tape_width;
    for (int j = lo; j <= hi; ++j) {
      const Vec3 tangent = (s.position(std::min(j + 1, hi)) - s.position(std::max(j - 1, lo))).normalized();
      const Vec3 normal = closest_point_on_surface(mesh, s.position(j)).normal;
      Vec3 binormal = tangent.cross(normal);
      if (binormal.norm() < 1e-12) binormal = tangent.unitOrthogonal();
      binormal.normalize();
      write_vertex(out, s.position(j) - half * binormal);
      write_vertex(out, s.position(j) + half * binormal);
    }
    for (int k = 0; k < hi - lo; ++k) {
      const long a = next_index + 2L * k;
      out << "f " << a << ' ' << a + 2 << ' ' << a + 3 << '\n';
      out << "f " << a << ' ' << a + 3 << ' ' << a + 1 << '\n';
      ++result.ribbon_quads;
    }
    next_index += 2L * (hi - lo + 1);
    result.ribbon_written = true;
  }

  if (options.snapshot_stride > 0) {
    for (std::size_t r = 0; r < plan.records.size(); r += static_cast<std::size_t>(options.snapshot_stride)) {
      const PlanRecord& record = plan.records[r];
      for (const Side side : {Side::kStart, Side::kEnd}) {
        const int front = side == Side::kStart ? record.front_start : record.front_end;
        const int tail = side == Side::kStart ? 0 : s.size() - 1;
        if (front == tail) continue;
        const Rot3& rotation = side == Side::kStart ? record.start.rotation : record.end.rotation;
        const int step = side == Side::kStart ? -1 : 1;
        out << "o free_" << (side == Side::kStart ? "start" : "end") << '_' << record.iteration << '\n';
        int count = 0;
        for (int j = front; j != tail + step; j += step, ++count) write_vertex(out, free_position(plan, rotation, front, j));
        out << 'l';
        for (int k = 0; k < count; ++k) out << ' ' << next_index + k;
        out << '\n';
        next_index += count;
        ++result.snapshots;
      }
    }
  }

  if (summary) *summary = result;
  return out.str();
}

SceneSummary export_scene(const SurfaceMesh& mesh, const PlacementPlan& plan, const SceneOptions& options,
                          const std::filesystem::path& path) {
  SceneSummary summary;
  const std::string text = format_scene_obj(mesh, plan, options, &summary);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  return summary;
}

}  // namespace tapewrap
