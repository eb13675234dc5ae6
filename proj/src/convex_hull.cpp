#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tapewrap/error.hpp"
#include "tapewrap/geometry.hpp"

namespace tapewrap {

namespace {

struct HullFace {
  int v[3];
  Vec3 normal;
  double offset;
  bool alive = true;

  double distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

std::uint64_t edge_key(int from, int to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

// Incremental hull: faces are kept with outward normals and a directed-edge
// map so each half-edge (u, v) knows its face and the twin (v, u) its neighbour.
class IncrementalHull {
 public:
  explicit IncrementalHull(std::span<const Vec3> points) : points_(points) {}

  void build() {
    const int n = static_cast<int>(points_.size());
    if (n < 4) throw Error(ErrorCode::kDegenerateHull, "convex hull needs at least 4 points");
    int seed[4];
    choose_simplex(seed);

    const Vec3 inner = 0.25 * (points_[seed[0]] + points_[seed[1]] + points_[seed[2]] + points_[seed[3]]);
    const int tet[4][3] = {{seed[0], seed[1], seed[2]},
                           {seed[0], seed[3], seed[1]},
                           {seed[1], seed[3], seed[2]},
                           {seed[2], seed[3], seed[0]}};
    for (const auto& f : tet) {
      int a = f[0], b = f[1], c = f[2];
      const Vec3 normal = (points_[b] - points_[a]).cross(points_[c] - points_[a]);
      if (normal.dot(points_[a] - inner) < 0.0) std::swap(b, c);
      add_face(a, b, c);
    }

    for (int i = 0; i < n; ++i) {
      if (i == seed[0] || i == seed[1] || i == seed[2] || i == seed[3]) continue;
      insert(i);
    }
  }

  SurfaceMesh to_mesh() const {
    std::vector<int> remap(points_.size(), -1);
    std::vector<char> used(points_.size(), 0);
    for (const HullFace& f : faces_) {
      if (!f.alive) continue;
      for (int k = 0; k < 3; ++k) used[f.v[k]] = 1;
    }
    std::vector<Vec3> vertices;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!used[i]) continue;
      remap[i] = static_cast<int>(vertices.size());
      vertices.push_back(points_[i]);
    }
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& v : vertices) centroid += v;
    centroid /= static_cast<double>(vertices.size());

    std::vector<Triangle> triangles;
    for (const HullFace& f : faces_) {
      if (!f.alive) continue;
      Triangle t{remap[f.v[0]], remap[f.v[1]], remap[f.v[2]]};
      const Vec3& a = vertices[t[0]];
      const Vec3 normal = (vertices[t[1]] - a).cross(vertices[t[2]] - a);
      const Vec3 face_centroid = (a + vertices[t[1]] + vertices[t[2]]) / 3.0;
      if (normal.dot(face_centroid - centroid) < 0.0) std::swap(t[1], t[2]);
      triangles.push_back(t);
    }
    try {
      return SurfaceMesh(std::move(vertices), std::move(triangles));
    } catch (const Error& e) {
      throw Error(ErrorCode::kDegenerateHull, std::string("hull produced an invalid face: ") + e.what());
    }
  }

 private:
  void choose_simplex(int seed[4]) const {
    const int n = static_cast<int>(points_.size());
    seed[0] = 0;
    auto farthest = [&](auto&& measure) {
      int best = -1;
      double best_value = -1.0;
      for (int i = 0; i < n; ++i) {
        const double value = measure(points_[i]);
        if (value > best_value) {
          best_value = value;
          best = i;
        }
      }
      return std::pair{best, best_value};
    };

    const Vec3& p0 = points_[seed[0]];
    auto [i1, d1] = farthest([&](const Vec3& p) { return (p - p0).norm(); });
    if (d1 <= kHullPlaneEpsilon) throw Error(ErrorCode::kDegenerateHull, "all points coincide");
    seed[1] = i1;

    const Vec3 dir = (points_[i1] - p0).normalized();
    auto [i2, d2] = farthest([&](const Vec3& p) { return (p - p0).cross(dir).norm(); });
    if (d2 <= kHullPlaneEpsilon) throw Error(ErrorCode::kDegenerateHull, "points are collinear");
    seed[2] = i2;

    const Vec3 normal = (points_[i1] - p0).cross(points_[i2] - p0).normalized();
    auto [i3, d3] = farthest([&](const Vec3& p) { return std::abs(normal.dot(p - p0)); });
    if (d3 <= kHullPlaneEpsilon) throw Error(ErrorCode::kDegenerateHull, "points are coplanar");
    seed[3] = i3;
  }

  void add_face(int a, int b, int c) {
    HullFace f;
    f.v[0] = a;
    f.v[1] = b;
    f.v[2] = c;
    f.normal = (points_[b] - points_[a]).cross(points_[c] - points_[a]).normalized();
    f.offset = f.normal.dot(points_[a]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(f);
    for (int k = 0; k < 3; ++k) edges_[edge_key(f.v[k], f.v[(k + 1) % 3])] = id;
  }

  void insert(int index) {
    const Vec3& p = points_[index];
    visible_.clear();
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (faces_[f].alive && faces_[f].distance(p) > kHullPlaneEpsilon) visible_.push_back(static_cast<int>(f));
    }
    if (visible_.empty()) return;

    for (int f : visible_) faces_[f].alive = false;
    horizon_.clear();
    for (int f : visible_) {
      const HullFace& face = faces_[f];
      for (int k = 0; k < 3; ++k) {
        const int u = face.v[k];
        const int v = face.v[(k + 1) % 3];
        const auto twin = edges_.find(edge_key(v, u));
        if (twin != edges_.end() && faces_[twin->second].alive) horizon_.emplace_back(u, v);
      }
    }
    for (int f : visible_) {
      const HullFace& face = faces_[f];
      for (int k = 0; k < 3; ++k) {
        const auto it = edges_.find(edge_key(face.v[k], face.v[(k + 1) % 3]));
        if (it != edges_.end() && it->second == f) edges_.erase(it);
      }
    }
    for (const auto& [u, v] : horizon_) add_face(u, v, index);
  }

  std::span<const Vec3> points_;
  std::vector<HullFace> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
  std::vector<int> visible_;
  std::vector<std::pair<int, int>> horizon_;
};

}  // namespace

SurfaceMesh convex_hull(std::span<const Vec3> points) {
  IncrementalHull hull(points);
  hull.build();
  return hull.to_mesh();
}

}  // namespace tapewrap
