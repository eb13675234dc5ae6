#include "tapewrap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tapewrap/error.hpp"

namespace tapewrap {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAxis: return "InvalidAxis";
    case ErrorCode::kInvalidVector: return "InvalidVector";
    case ErrorCode::kDegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::kEmptyMesh: return "EmptyMesh";
    case ErrorCode::kDegenerateHull: return "DegenerateHull";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kInvalidMesh: return "InvalidMesh";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kIndexError: return "IndexError";
    case ErrorCode::kNoFreeSegment: return "NoFreeSegment";
    case ErrorCode::kInvalidDirection: return "InvalidDirection";
    case ErrorCode::kTapeTooShort: return "TapeTooShort";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInconsistentPlan: return "InconsistentPlan";
    case ErrorCode::kOracleFailed: return "OracleFailed";
  }
  return "UnknownError";
}

Rot3 rodrigues(const Vec3& axis, double angle) {
  if (!is_unit(axis)) {
    std::ostringstream msg;
    msg << "rotation axis must be unit length, got norm " << axis.norm();
    throw Error(ErrorCode::kInvalidAxis, msg.str());
  }
  if (!std::isfinite(angle)) {
    throw Error(ErrorCode::kInvalidAxis, "rotation angle must be finite");
  }
  Rot3 k;
  k << 0.0, -axis.z(), axis.y(),
       axis.z(), 0.0, -axis.x(),
       -axis.y(), axis.x(), 0.0;
  return Rot3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

AxisAngle axis_angle_of(const Rot3& rotation) {
  const Vec3 vee(rotation(2, 1) - rotation(1, 2),
                 rotation(0, 2) - rotation(2, 0),
                 rotation(1, 0) - rotation(0, 1));
  const double s = 0.5 * vee.norm();
  const double c = 0.5 * (rotation.trace() - 1.0);
  const double angle = std::atan2(s, c);
  if (s == 0.0) {
    return {Vec3::Zero(), angle};
  }
  return {vee.normalized(), angle};
}

double rotation_defect(const Rot3& rotation) {
  const double ortho = (rotation.transpose() * rotation - Rot3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(rotation.determinant() - 1.0));
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

// Voronoi-region walk over vertices, edges and the face interior.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  if (triangle_area(a, b, c) <= kMinTriangleArea) {
    throw Error(ErrorCode::kDegenerateTriangle, "triangle area below 1e-12 m^2");
  }
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    return a + (d1 / (d1 - d3)) * ab;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    return a + (d2 / (d2 - d6)) * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int n = static_cast<int>(vertices_.size());
  std::vector<std::size_t> out_of_range;
  std::vector<std::size_t> degenerate;
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const Triangle& t = triangles_[f];
    if (std::any_of(t.begin(), t.end(), [n](int i) { return i < 0 || i >= n; })) {
      out_of_range.push_back(f);
      continue;
    }
    if (triangle_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]) <= kMinTriangleArea) {
      degenerate.push_back(f);
    }
  }
  if (!out_of_range.empty() || !degenerate.empty()) {
    std::ostringstream msg;
    auto list = [&msg](const char* label, const std::vector<std::size_t>& faces) {
      if (faces.empty()) return;
      msg << label << " faces:";
      const std::size_t shown = std::min<std::size_t>(faces.size(), 20);
      for (std::size_t i = 0; i < shown; ++i) msg << ' ' << faces[i];
      if (faces.size() > shown) msg << " ... (" << faces.size() << " total)";
      msg << "; ";
    };
    list("out-of-range index in", out_of_range);
    list("zero-area", degenerate);
    throw Error(ErrorCode::kInvalidMesh, msg.str());
  }

  normals_.reserve(triangles_.size());
  offsets_.reserve(triangles_.size());
  for (const Triangle& t : triangles_) {
    const Vec3& a = vertices_[t[0]];
    const Vec3 normal = (vertices_[t[1]] - a).cross(vertices_[t[2]] - a).normalized();
    normals_.push_back(normal);
    offsets_.push_back(normal.dot(a));
  }
}

}  // namespace tapewrap
