#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tapewrap/error.hpp"
#include "tapewrap/mesh_io.hpp"

namespace tapewrap {

static_assert(std::endian::native == std::endian::little, "STL I/O assumes a little-endian host");

namespace {

constexpr std::size_t kStlHeaderBytes = 80;
constexpr std::size_t kStlRecordBytes = 50;

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kFormatError,
                "line " + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

int parse_face_index(std::string_view token, std::size_t line) {
  // Accept "i", "i/t", "i//n", "i/t/n"; only the vertex index matters.
  token = token.substr(0, token.find('/'));
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 1) {
    throw Error(ErrorCode::kFormatError,
                "line " + std::to_string(line) + ": bad face index '" + std::string(token) + "'");
  }
  return value - 1;
}

std::string read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

}  // namespace

SurfaceMesh parse_obj(std::string_view text, double scale) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.empty()) continue;

    if (tokens[0] == "v") {
      if (tokens.size() < 4) {
        throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
      }
      vertices.emplace_back(scale * parse_double(tokens[1], line_no), scale * parse_double(tokens[2], line_no),
                            scale * parse_double(tokens[3], line_no));
    } else if (tokens[0] == "f") {
      if (tokens.size() != 4) {
        throw Error(ErrorCode::kFormatError,
                    "line " + std::to_string(line_no) + ": only triangular faces are supported");
      }
      triangles.push_back({parse_face_index(tokens[1], line_no), parse_face_index(tokens[2], line_no),
                           parse_face_index(tokens[3], line_no)});
    }
    // Other record types (vn, vt, o, g, s, usemtl, ...) carry nothing we use.
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh parse_stl_binary(std::string_view bytes, double scale) {
  if (bytes.size() < kStlHeaderBytes + 4) throw Error(ErrorCode::kFormatError, "STL shorter than its header");
  const auto count = get<std::uint32_t>(bytes, kStlHeaderBytes);
  const std::size_t expected = kStlHeaderBytes + 4 + static_cast<std::size_t>(count) * kStlRecordBytes;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::kFormatError, "STL size " + std::to_string(bytes.size()) + " does not match " +
                                             std::to_string(count) + " face records");
  }
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::map<std::array<float, 3>, int> index_of;
  for (std::uint32_t f = 0; f < count; ++f) {
    const std::size_t base = kStlHeaderBytes + 4 + static_cast<std::size_t>(f) * kStlRecordBytes + 12;
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const std::array<float, 3> key{get<float>(bytes, base + 12 * k), get<float>(bytes, base + 12 * k + 4),
                                     get<float>(bytes, base + 12 * k + 8)};
      auto [it, inserted] = index_of.emplace(key, static_cast<int>(vertices.size()));
      if (inserted) vertices.emplace_back(scale * key[0], scale * key[1], scale * key[2]);
      t[k] = it->second;
    }
    triangles.push_back(t);
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

std::string format_obj(const SurfaceMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "# tapewrap surface mesh\n";
  for (const Vec3& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Triangle& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  return out.str();
}

std::string format_stl_binary(const SurfaceMesh& mesh) {
  std::string out(kStlHeaderBytes, '\0');
  const std::string_view header = "tapewrap binary STL";
  std::copy(header.begin(), header.end(), out.begin());
  put(out, static_cast<std::uint32_t>(mesh.triangle_count()));
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    const Vec3& n = mesh.normals()[f];
    for (int k = 0; k < 3; ++k) put(out, static_cast<float>(n[k]));
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = mesh.corner(f, c);
      for (int k = 0; k < 3; ++k) put(out, static_cast<float>(v[k]));
    }
    put(out, std::uint16_t{0});
  }
  return out;
}

SurfaceMesh load_mesh(const std::filesystem::path& path, const LoadOptions& options) {
  if (!(options.scale > 0.0)) throw Error(ErrorCode::kInvalidConfig, "mesh scale must be > 0");
  const std::string bytes = read_file(path);
  const std::string ext = lower_extension(path);
  SurfaceMesh mesh;
  if (ext == ".stl") {
    mesh = parse_stl_binary(bytes, options.scale);
  } else if (ext == ".obj") {
    mesh = parse_obj(bytes, options.scale);
  } else {
    throw Error(ErrorCode::kFormatError, "unsupported mesh extension '" + ext + "' (expected .obj or .stl)");
  }
  if (mesh.empty()) throw Error(ErrorCode::kInvalidMesh, path.string() + " contains no faces");

  switch (options.convexify) {
    case ConvexifyMode::kNever:
      return mesh;
    case ConvexifyMode::kIfNeeded:
      if (convexity_violation(mesh) <= kConvexityTolerance) return mesh;
      spdlog::info("{} is not convex; replacing it with its convex hull", path.string());
      [[fallthrough]];
    case ConvexifyMode::kAlways:
      return convexify(mesh);
  }
  return mesh;
}

void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path) {
  const std::string payload = lower_extension(path) == ".stl" ? format_stl_binary(mesh) : format_obj(mesh);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace tapewrap
