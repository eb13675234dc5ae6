#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "support.hpp"
#include "tapewrap/error.hpp"
#include "tapewrap/geometry.hpp"

namespace tapewrap {
namespace {

using test::oracle_closest_on_mesh;
using test::oracle_closest_on_triangle;
using test::random_unit;

constexpr double kPi = std::numbers::pi;

TEST(Rodrigues, QuarterTurnAboutZ) {
  const Vec3 r = rodrigues(Vec3::UnitZ(), kPi / 2) * Vec3::UnitX();
  EXPECT_LT((r - Vec3::UnitY()).norm(), 1e-15);
}

TEST(Rodrigues, ZeroAngleIsIdentity) {
  EXPECT_EQ(rodrigues(Vec3::UnitY(), 0.0), Rot3::Identity());
}

TEST(Rodrigues, HalfTurn) {
  const Vec3 r = rodrigues(Vec3::UnitZ(), kPi) * Vec3::UnitX();
  EXPECT_LT((r + Vec3::UnitX()).norm(), 1e-15);
}

TEST(Rodrigues, RejectsNonUnitAxis) {
  try {
    rodrigues(Vec3(0, 0, 1.001), 0.1);
    FAIL() << "expected InvalidAxis";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidAxis);
  }
  EXPECT_THROW(rodrigues(Vec3::Zero(), 0.1), Error);
}

TEST(Rodrigues, MatchesAngleAxisOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 200; ++k) {
    const Vec3 axis = random_unit(rng);
    const double a = angle(rng);
    EXPECT_LT((rodrigues(axis, a) - test::oracle_rotation(axis, a)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rodrigues, CompositionAddsAngles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 axis = random_unit(rng);
    const double a = angle(rng);
    const double b = angle(rng);
    const Rot3 lhs = rodrigues(axis, a) * rodrigues(axis, b);
    EXPECT_LT((lhs - rodrigues(axis, a + b)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(rotation_defect(lhs), 1e-9);
  }
}

TEST(Rodrigues, AccumulationDriftIsBounded) {
  std::mt19937_64 rng(3);
  const double step = 0.5 * kDegreesToRadians;
  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 axis = random_unit(rng);
    Rot3 acc = Rot3::Identity();
    const int n = 720;
    for (int k = 0; k < n; ++k) acc = rodrigues(axis, step) * acc;
    EXPECT_LT((acc - rodrigues(axis, n * step)).cwiseAbs().maxCoeff(), n * 1e-9);
  }
}

TEST(AxisAngle, InvertsRodrigues) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(1e-3, kPi - 1e-3);
  for (int k = 0; k < 200; ++k) {
    const Vec3 axis = random_unit(rng);
    const double a = angle(rng);
    const AxisAngle aa = axis_angle_of(rodrigues(axis, a));
    EXPECT_NEAR(aa.angle, a, 1e-9);
    EXPECT_LT((aa.axis - axis).norm(), 1e-6);
  }
  EXPECT_EQ(axis_angle_of(Rot3::Identity()).angle, 0.0);
}

// Reference triangle.
const Vec3 kA(0, 0, 0), kB(1, 0, 0), kC(0, 1, 0);

TEST(ClosestPointOnTriangle, InteriorProjection) {
  EXPECT_LT((closest_point_on_triangle({0.2, 0.3, 0.5}, kA, kB, kC) - Vec3(0.2, 0.3, 0)).norm(), 1e-15);
}

TEST(ClosestPointOnTriangle, VertexRegion) {
  EXPECT_LT((closest_point_on_triangle({2, -1, 0}, kA, kB, kC) - kB).norm(), 1e-15);
}

TEST(ClosestPointOnTriangle, HypotenuseAgreesWithGridSearch) {
  const Vec3 p(0.6, 0.6, 0.1);
  const Vec3 q = closest_point_on_triangle(p, kA, kB, kC);
  EXPECT_LT((q - Vec3(0.5, 0.5, 0)).norm(), 1e-15);
  const Vec3 grid = test::grid_closest_on_triangle(p, kA, kB, kC, 400);
  EXPECT_LT((q - grid).norm(), 5e-3);
  EXPECT_LE((q - p).norm(), (grid - p).norm() + 1e-15);
}

TEST(ClosestPointOnTriangle, RandomQueriesMatchOracle) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
    if (triangle_area(a, b, c) < 1e-3) continue;
    const Vec3 p(u(rng), u(rng), u(rng));
    const Vec3 q = closest_point_on_triangle(p, a, b, c);
    const Vec3 o = oracle_closest_on_triangle(p, a, b, c);
    EXPECT_NEAR((q - p).norm(), (o - p).norm(), 1e-12);
    EXPECT_LT((q - o).norm(), 1e-9);
  }
}

TEST(ClosestPointOnTriangle, DegenerateThrows) {
  try {
    closest_point_on_triangle(Vec3::Zero(), kA, kB, Vec3(2, 0, 0));
    FAIL() << "expected DegenerateTriangle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateTriangle);
  }
}

TEST(SurfaceMesh, RejectsBadIndicesAndZeroArea) {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}};
  EXPECT_THROW(SurfaceMesh(v, {{0, 1, 7}}), Error);
  try {
    SurfaceMesh(v, {{0, 1, 2}, {0, 1, 3}});
    FAIL() << "expected InvalidMesh";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidMesh);
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(ClosestPointOnSurface, FlatPatch) {
  const SurfaceMesh mesh = test::plane_mesh();
  const SurfacePoint q = closest_point_on_surface(mesh, {0.02, 0.03, 0.5});
  EXPECT_LT((q.position - Vec3(0.02, 0.03, 0)).norm(), 1e-15);
  EXPECT_NEAR(q.signed_distance, 0.5, 1e-15);
  EXPECT_LT((q.normal - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(ClosestPointOnSurface, CylinderAgainstOracle) {
  const SurfaceMesh mesh = test::leg_mesh(32);
  const SurfacePoint q = closest_point_on_surface(mesh, {0.1, 0, 0});
  const double sagitta = 0.05 * (1 - std::cos(kPi / 64));
  EXPECT_NEAR(q.signed_distance, 0.05, sagitta + 1e-12);
  EXPECT_LT((q.position - Vec3(0.05, 0, 0)).norm(), sagitta + 1e-12);
  EXPECT_GT(q.normal.x(), std::cos(kPi / 64) - 1e-12);
  const test::OracleHit o = oracle_closest_on_mesh(mesh, {0.1, 0, 0});
  EXPECT_NEAR(q.signed_distance, o.distance, 1e-12);
}

TEST(ClosestPointOnSurface, AtVertexIsZero) {
  const SurfaceMesh mesh = test::leg_mesh();
  const Vec3 v = mesh.vertices()[5];
  const SurfacePoint q = closest_point_on_surface(mesh, v);
  EXPECT_EQ(q.signed_distance, 0.0);
  EXPECT_LT((q.position - v).norm(), 1e-15);
}

TEST(ClosestPointOnSurface, EmptyMeshThrows) {
  try {
    closest_point_on_surface(SurfaceMesh(), Vec3::Zero());
    FAIL() << "expected EmptyMesh";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyMesh);
  }
}

void check_against_oracle(const SurfaceMesh& mesh, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const SurfacePoint q = closest_point_on_surface(mesh, p);
    const test::OracleHit o = oracle_closest_on_mesh(mesh, p);
    ASSERT_NEAR(std::abs(q.signed_distance), o.distance, 1e-12) << "query " << p.transpose();
    ASSERT_LT((q.position - o.position).norm(), 1e-9);
    // Global optimality: no vertex is closer than the reported point.
    for (const Vec3& v : mesh.vertices()) ASSERT_LE(o.distance, (v - p).norm() + 1e-15);
    // The point lies on the reported face and the normal is outward consistent.
    const Triangle& t = mesh.triangles()[static_cast<std::size_t>(q.face)];
    const Vec3 on_face =
        oracle_closest_on_triangle(q.position, mesh.vertices()[t[0]], mesh.vertices()[t[1]], mesh.vertices()[t[2]]);
    ASSERT_LT((on_face - q.position).norm(), 1e-9);
    ASSERT_NEAR(q.normal.norm(), 1.0, 1e-12);
    if (q.signed_distance >= 0.0) {
      ASSERT_GE(q.normal.dot(p - q.position), -1e-12);
    }
  }
}

TEST(ClosestPointOnSurface, LegMatchesExhaustiveOracle) { check_against_oracle(test::leg_mesh(), 0.3, 101); }
TEST(ClosestPointOnSurface, HipMatchesExhaustiveOracle) { check_against_oracle(test::hip_mesh(), 0.3, 102); }
TEST(ClosestPointOnSurface, HeelMatchesExhaustiveOracle) { check_against_oracle(test::heel_mesh(), 0.3, 103); }

TEST(ClosestPointOnSurface, SignedDistanceInsideIsNegative) {
  const SurfaceMesh mesh = test::box_mesh(Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const SurfacePoint inside = closest_point_on_surface(mesh, {0.2, 0.1, 0.5});
  EXPECT_NEAR(inside.signed_distance, -0.5, 1e-15);
  const SurfacePoint outside = closest_point_on_surface(mesh, {0.2, 0.1, 1.5});
  EXPECT_NEAR(outside.signed_distance, 0.5, 1e-15);
}

TEST(ClosestPointOnSurface, ParallelKernelMatchesSerial) {
  MeshSpec spec;
  spec.kind = MeshKind::kHemisphere;
  spec.radius = 0.15;
  spec.resolution = 48;  // above the parallel threshold
  const SurfaceMesh mesh = generate_mesh(spec);
  ASSERT_GT(mesh.triangle_count(), kParallelTriangleThreshold);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int k = 0; k < 200; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const SurfacePoint a = closest_point_on_surface_serial(mesh, p);
    const SurfacePoint b = closest_point_on_surface_parallel(mesh, p);
    EXPECT_EQ(a.face, b.face);
    EXPECT_EQ(a.position, b.position);
    EXPECT_EQ(a.signed_distance, b.signed_distance);
  }
  EXPECT_EQ(convexity_violation_serial(mesh), convexity_violation_parallel(mesh));
}

TEST(ClosestPointOnSurface, TieBreaksToLowestFace) {
  // Query straight above a shared edge of the plane grid.
  const SurfaceMesh mesh = test::plane_mesh();
  const SurfacePoint q = closest_point_on_surface(mesh, {0.0, 0.0, 0.1});
  int lowest = -1;
  for (std::size_t f = 0; f < mesh.triangle_count(); ++f) {
    const Vec3 o = oracle_closest_on_triangle({0, 0, 0.1}, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2));
    if (std::abs((o - Vec3(0, 0, 0.1)).norm() - 0.1) < 1e-15) {
      lowest = static_cast<int>(f);
      break;
    }
  }
  EXPECT_EQ(q.face, lowest);
}

TEST(ClosestPointOnSurface, VertexTieTakesFaceFacingQuery) {
  const SurfaceMesh box = test::box_mesh(Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const Vec3 p(1.5, 1.01, 1.01);
  const SurfacePoint q = closest_point_on_surface(box, p);
  EXPECT_LT((q.position - Vec3(1, 1, 1)).norm(), 1e-15);
  EXPECT_LT((q.normal - Vec3::UnitX()).norm(), 1e-12);
}

}  // namespace
}  // namespace tapewrap
