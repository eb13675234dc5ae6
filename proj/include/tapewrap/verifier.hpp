#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tapewrap/geometry.hpp"
#include "tapewrap/planner.hpp"

namespace tapewrap {

struct Tolerances {
  double length_tol = 2e-3;
  double wrinkle_tol = 1e-9;
  double tension_tol = 1e-7;
  double coverage_min = 100.0;  // percent
  double replay_tol = 1e-9;
  double orthonormality_tol = 1e-9;

  /// length_tol = 2 * epsilon, everything else at its default.
  static Tolerances defaults_for(const PlannerConfig& config);
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  double coverage_percent = 0.0;  // kinematic: elements closer than epsilon / N
  double worst_length_residual = 0.0;
  int worst_length_joint = -1;
  double worst_wrinkle_residual = 0.0;
  int worst_wrinkle_iteration = -1;
  double worst_tension_residual = 0.0;
  int worst_tension_iteration = -1;
  double max_trajectory_step = 0.0;
  int iterations = 0;
  PlanStatus status = PlanStatus::kComplete;
  double adhesion_epsilon = 0.0;  // threshold behind the coverage count
  std::vector<CheckResult> checks;

  bool pass() const;
  const CheckResult* find(std::string_view name) const;
  std::vector<std::string> failed_checks() const;
};

/// Re-derives every invariant from the recorded poses, fronts and final
/// element positions; planner-internal flags are not trusted. A residual
/// already applied to the plan is removed before replay.
/// Throws Error(kInconsistentPlan) when the plan cannot belong to `mesh`.
VerificationReport verify_plan(const PlacementPlan& plan, const SurfaceMesh& mesh, const PlannerConfig& config,
                               const Tolerances& tolerances);

struct OracleComparison {
  double deviation = 0.0;        // max pointwise distance over the shared arclength
  double overlap_length = 0.0;   // arclength over which the centerlines were compared
  int samples = 0;
  PlanStatus base_status = PlanStatus::kComplete;
  PlanStatus oracle_status = PlanStatus::kComplete;
};

/// Plans with `config` and with a refined config (angle step / 4, element
/// length / 2), then compares the attached centerlines resampled by signed
/// arclength from the initial adhesion point. Throws Error(kOracleFailed) if
/// the refined plan does not complete.
OracleComparison refinement_oracle(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init,
                                   double tape_length, const PlannerConfig& config);

/// Max distance between two centerlines parameterized by signed arclength
/// from their anchor element, sampled every `spacing` meters.
OracleComparison compare_centerlines(const PlacementPlan& a, const PlacementPlan& b, double spacing);

enum class ReportFormat { kJson, kText };

std::string report_to_json(const VerificationReport& report);
/// Throws Error(kFormatError).
VerificationReport report_from_json(std::string_view json);
std::string report_to_text(const VerificationReport& report);

/// Throws Error(kIoError).
void emit_report(const VerificationReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace tapewrap
