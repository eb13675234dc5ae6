// Serial reference vs OpenMP kernels for the closest-point scan and the
// convexity audit. Argument: hemisphere resolution (triangles ~ 8 * res^2).

#include <map>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "tapewrap/geometry.hpp"
#include "tapewrap/mesh_io.hpp"

namespace {

using tapewrap::Vec3;

const tapewrap::SurfaceMesh& hemisphere(int resolution) {
  static std::map<int, tapewrap::SurfaceMesh> cache;
  auto it = cache.find(resolution);
  if (it == cache.end()) {
    tapewrap::MeshSpec spec;
    spec.kind = tapewrap::MeshKind::kHemisphere;
    spec.radius = 0.15;
    spec.resolution = resolution;
    it = cache.emplace(resolution, tapewrap::generate_mesh(spec)).first;
  }
  return it->second;
}

std::vector<Vec3> queries() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<Vec3> q(64);
  for (Vec3& p : q) p = {u(rng), u(rng), u(rng)};
  return q;
}

template <tapewrap::SurfacePoint (*Kernel)(const tapewrap::SurfaceMesh&, const Vec3&)>
void closest_point(benchmark::State& state) {
  const tapewrap::SurfaceMesh& mesh = hemisphere(static_cast<int>(state.range(0)));
  const std::vector<Vec3> q = queries();
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(mesh, q[k++ % q.size()]));
  }
  state.counters["triangles"] = static_cast<double>(mesh.triangle_count());
}

template <double (*Kernel)(const tapewrap::SurfaceMesh&)>
void convexity(benchmark::State& state) {
  const tapewrap::SurfaceMesh& mesh = hemisphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(mesh));
  state.counters["triangles"] = static_cast<double>(mesh.triangle_count());
}

}  // namespace

BENCHMARK(closest_point<tapewrap::closest_point_on_surface_serial>)->Name("closest_point/serial")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(closest_point<tapewrap::closest_point_on_surface_parallel>)->Name("closest_point/openmp")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(convexity<tapewrap::convexity_violation_serial>)->Name("convexity/serial")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(convexity<tapewrap::convexity_violation_parallel>)->Name("convexity/openmp")->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
