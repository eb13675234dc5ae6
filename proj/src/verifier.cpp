#include "tapewrap/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tapewrap/error.hpp"
#include "tapewrap/tape_model.hpp"

namespace tapewrap {

namespace {

using nlohmann::json;

struct Worst {
  double value = 0.0;
  int where = -1;

  void offer(double candidate, int at) {
    if (where < 0 || candidate > value) {
      value = candidate;
      where = at;
    }
  }
};

// What one side of one record looked like before the record was taken.
struct SideHistory {
  int front;
  Rot3 rotation;
  Vec3 tail;
};

struct SideAudit {
  Worst replay, tension, direction, wrinkle, angle, continuity, orthonormality;
  double max_step = 0.0;
  int monotonicity_violations = 0;
};

void inconsistent(const std::string& what) { throw Error(ErrorCode::kInconsistentPlan, what); }

const EndEffectorPose& pose_of(const PlanRecord& r, Side side) { return side == Side::kStart ? r.start : r.end; }
const Vec3& tension_of(const PlanRecord& r, Side side) {
  return side == Side::kStart ? r.tension_start : r.tension_end;
}
int front_of(const PlanRecord& r, Side side) { return side == Side::kStart ? r.front_start : r.front_end; }

}  // namespace

Tolerances Tolerances::defaults_for(const PlannerConfig& config) {
  Tolerances t;
  t.length_tol = 2.0 * config.epsilon;
  return t;
}

bool VerificationReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> VerificationReport::failed_checks() const {
  std::vector<std::string> names;
  for (const CheckResult& c : checks) {
    if (!c.pass) names.push_back(c.name);
  }
  return names;
}

VerificationReport verify_plan(const PlacementPlan& plan, const SurfaceMesh& mesh, const PlannerConfig& config,
                               const Tolerances& tolerances) {
  const TapeState& final_state = plan.final_state;
  const int n = final_state.size();
  const int mid = final_state.mid;
  const double l_e = final_state.element_length;
  if (n < 3 || mid < 0 || mid >= n || !(l_e > 0.0)) inconsistent("tape layout is malformed");
  if (static_cast<int>(plan.records.size()) != plan.iterations) {
    inconsistent("record count " + std::to_string(plan.records.size()) + " does not match iteration count " +
                 std::to_string(plan.iterations));
  }

  std::vector<Vec3> layout(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) layout[j] = layout_position(plan.anchor_point, plan.direction, j, mid, l_e);
  auto final_position = [&](int j) -> const Vec3& { return final_state.position(j); };

  // Attached run as the records describe it.
  int lo = mid;
  int hi = mid;
  if (!plan.records.empty()) {
    lo = plan.records.back().front_start;
    hi = plan.records.back().front_end;
  }
  if (lo < 0 || hi >= n || lo > mid || hi < mid) inconsistent("final fronts out of range");
  for (int j = lo; j <= hi; ++j) {
    const double d = std::abs(closest_point_on_surface(mesh, final_position(j)).signed_distance);
    if (d > 10.0 * config.epsilon) {
      inconsistent("element " + std::to_string(j) + " is recorded as attached but lies " + std::to_string(d) +
                   " m from the mesh");
    }
  }

  VerificationReport report;
  report.iterations = plan.iterations;
  report.status = plan.status;
  report.adhesion_epsilon = config.epsilon;

  int adhered = 0;
  for (int j = 0; j < n; ++j) {
    if (is_adhered(final_position(j), mesh, config.adhesion())) ++adhered;
  }
  report.coverage_percent = 100.0 * adhered / n;

  Worst length;
  TapeState scratch = final_state;
  for (int j = lo + 1; j <= hi; ++j) length.offer(std::abs(c_length(scratch, j)), j);

  // Replay both sides record by record.
  SideAudit audit[2];
  SideHistory history[2] = {{mid, Rot3::Identity(), layout[0]}, {mid, Rot3::Identity(), layout[n - 1]}};
  const double step_chord = 2.0 * std::sin(0.5 * config.angle_step);
  for (std::size_t r = 0; r < plan.records.size(); ++r) {
    const PlanRecord& record = plan.records[r];
    const int iteration = record.iteration;
    for (Side side : {Side::kStart, Side::kEnd}) {
      SideAudit& a = audit[side == Side::kStart ? 0 : 1];
      SideHistory& prev = history[side == Side::kStart ? 0 : 1];
      const int tail = side == Side::kStart ? 0 : n - 1;
      const int step = side == Side::kStart ? -1 : 1;
      const int front = front_of(record, side);
      if (front < 0 || front >= n) inconsistent("record " + std::to_string(iteration) + " front out of range");
      const bool moved_backwards = side == Side::kStart ? front > prev.front : front < prev.front;
      if (moved_backwards) ++a.monotonicity_violations;

      const EndEffectorPose& pose = pose_of(record, side);
      const Vec3 recorded_tail = pose.position - plan.residual_applied * tension_of(record, side);
      a.orthonormality.offer(rotation_defect(pose.rotation), iteration);

      // Free segment from the pivot and the accumulated rotation.
      const Vec3& pivot = final_position(front);
      Vec3 replayed_tail = pivot;
      if (front != tail) {
        for (int j = front + step; j != tail + step; j += step) {
          scratch.elements[j].position = pivot + pose.rotation * (layout[j] - layout[front]);
        }
        scratch.front_start = side == Side::kStart ? front : mid;
        scratch.front_end = side == Side::kEnd ? front : mid;
        for (int j = std::min(front, mid); j <= std::max(front, mid); ++j) {
          scratch.elements[j].position = final_position(j);
        }
        replayed_tail = scratch.position(tail);
        a.tension.offer(std::abs(c_tension(scratch, side)), iteration);
        const Vec3 expected = (replayed_tail - pivot).normalized();
        a.direction.offer((tension_of(record, side) - expected).norm(), iteration);
      } else {
        a.direction.offer(tension_of(record, side).norm(), iteration);
      }
      a.replay.offer((recorded_tail - replayed_tail).norm(), iteration);

      const double moved = (recorded_tail - prev.tail).norm();
      const double free_length = (prev.tail - final_position(prev.front)).norm();
      a.max_step = std::max(a.max_step, moved);
      a.continuity.offer(moved - (step_chord * free_length + config.epsilon), iteration);

      const AxisAngle increment = axis_angle_of(pose.rotation * prev.rotation.transpose());
      if (increment.angle > 0.5 * config.angle_step) {
        a.angle.offer(std::abs(increment.angle - config.angle_step), iteration);
        if (front != prev.front) a.angle.offer(increment.angle, iteration);
        const Vec3 normal = closest_point_on_surface(mesh, final_position(front)).normal;
        a.wrinkle.offer(std::abs(c_wrinkle(increment.axis, normal)), iteration);
      } else {
        a.angle.offer(increment.angle, iteration);
      }

      prev = {front, pose.rotation, recorded_tail};
    }
  }

  auto merged = [&](Worst SideAudit::*field) {
    Worst w = audit[0].*field;
    if ((audit[1].*field).where >= 0) w.offer((audit[1].*field).value, (audit[1].*field).where);
    return w;
  };
  const Worst replay = merged(&SideAudit::replay);
  const Worst tension = merged(&SideAudit::tension);
  const Worst direction = merged(&SideAudit::direction);
  const Worst wrinkle = merged(&SideAudit::wrinkle);
  const Worst angle = merged(&SideAudit::angle);
  const Worst continuity = merged(&SideAudit::continuity);
  const Worst orthonormality = merged(&SideAudit::orthonormality);

  report.worst_length_residual = length.value;
  report.worst_length_joint = length.where;
  report.worst_wrinkle_residual = wrinkle.value;
  report.worst_wrinkle_iteration = wrinkle.where;
  report.worst_tension_residual = tension.value;
  report.worst_tension_iteration = tension.where;
  report.max_trajectory_step = std::max(audit[0].max_step, audit[1].max_step);
  const int monotonicity = audit[0].monotonicity_violations + audit[1].monotonicity_violations;

  auto at_most = [](std::string name, double value, double tol) { return CheckResult{std::move(name), value, tol, value <= tol}; };
  report.checks = {
      CheckResult{"coverage", report.coverage_percent, tolerances.coverage_min,
                  report.coverage_percent >= tolerances.coverage_min},
      CheckResult{"status", plan.status == PlanStatus::kComplete ? 1.0 : 0.0, 1.0,
                  plan.status == PlanStatus::kComplete},
      at_most("length", length.value, tolerances.length_tol),
      at_most("wrinkle", wrinkle.value, tolerances.wrinkle_tol),
      at_most("tension", tension.value, tolerances.tension_tol),
      at_most("tension_direction", direction.value, tolerances.replay_tol),
      at_most("replay", replay.value, tolerances.replay_tol),
      at_most("angle_step", angle.value, tolerances.replay_tol),
      at_most("continuity", continuity.value, 0.0),
      at_most("monotonicity", monotonicity, 0.0),
      at_most("orthonormality", orthonormality.value, tolerances.orthonormality_tol),
  };
  return report;
}

namespace {

struct Centerline {
  std::vector<Vec3> points;
  std::vector<double> arclength;  // signed, zero at the anchor element
};

Centerline attached_centerline(const PlacementPlan& plan) {
  const TapeState& s = plan.final_state;
  Centerline c;
  for (int j = s.front_start; j <= s.front_end; ++j) c.points.push_back(s.position(j));
  c.arclength.assign(c.points.size(), 0.0);
  const int anchor = s.mid - s.front_start;
  for (int j = anchor + 1; j < static_cast<int>(c.points.size()); ++j) {
    c.arclength[j] = c.arclength[j - 1] + (c.points[j] - c.points[j - 1]).norm();
  }
  for (int j = anchor - 1; j >= 0; --j) {
    c.arclength[j] = c.arclength[j + 1] - (c.points[j + 1] - c.points[j]).norm();
  }
  return c;
}

Vec3 sample(const Centerline& c, double s) {
  const auto it = std::upper_bound(c.arclength.begin(), c.arclength.end(), s);
  if (it == c.arclength.begin()) return c.points.front();
  if (it == c.arclength.end()) return c.points.back();
  const std::size_t j = static_cast<std::size_t>(it - c.arclength.begin());
  const double span = c.arclength[j] - c.arclength[j - 1];
  const double t = span > 0.0 ? (s - c.arclength[j - 1]) / span : 0.0;
  return c.points[j - 1] + t * (c.points[j] - c.points[j - 1]);
}

}  // namespace

OracleComparison compare_centerlines(const PlacementPlan& a, const PlacementPlan& b, double spacing) {
  const Centerline ca = attached_centerline(a);
  const Centerline cb = attached_centerline(b);
  const double from = std::max(ca.arclength.front(), cb.arclength.front());
  const double to = std::min(ca.arclength.back(), cb.arclength.back());
  OracleComparison out;
  out.base_status = a.status;
  out.oracle_status = b.status;
  if (to < from) return out;
  out.overlap_length = to - from;
  const int intervals = std::max(1, static_cast<int>(std::ceil(out.overlap_length / spacing)));
  for (int k = 0; k <= intervals; ++k) {
    const double s = from + out.overlap_length * k / intervals;
    out.deviation = std::max(out.deviation, (sample(ca, s) - sample(cb, s)).norm());
  }
  out.samples = intervals + 1;
  return out;
}

OracleComparison refinement_oracle(const SurfaceMesh& mesh, const Vec3& p_init, const Vec3& d_init,
                                   double tape_length, const PlannerConfig& config) {
  PlannerConfig refined = config;
  refined.angle_step = config.angle_step / 4.0;
  refined.element_length = config.element_length / 2.0;
  refined.max_iterations = 0;
  const PlacementPlan base = plan_bimanual(mesh, p_init, d_init, tape_length, config);
  const PlacementPlan oracle = plan_bimanual(mesh, p_init, d_init, tape_length, refined);
  if (oracle.status != PlanStatus::kComplete) {
    throw Error(ErrorCode::kOracleFailed, "refined plan stopped after " + std::to_string(oracle.iterations) +
                                              " iterations without completing");
  }
  return compare_centerlines(base, oracle, refined.element_length / 4.0);
}

std::string report_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  const json doc = {
      {"coverage_percent", report.coverage_percent},
      {"coverage_basis", "kinematic: elements within adhesion_epsilon of the surface / element count"},
      {"adhesion_epsilon", report.adhesion_epsilon},
      {"checks", checks},
      {"status", std::string(plan_status_name(report.status))},
      {"iterations", report.iterations},
      {"pass", report.pass()},
      {"failed_checks", report.failed_checks()},
      {"max_trajectory_step", report.max_trajectory_step},
      {"worst",
       {{"length", {{"value", report.worst_length_residual}, {"joint", report.worst_length_joint}}},
        {"wrinkle", {{"value", report.worst_wrinkle_residual}, {"iteration", report.worst_wrinkle_iteration}}},
        {"tension", {{"value", report.worst_tension_residual}, {"iteration", report.worst_tension_iteration}}}}},
  };
  return doc.dump(2) + "\n";
}

VerificationReport report_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    VerificationReport r;
    r.coverage_percent = doc.at("coverage_percent").get<double>();
    r.adhesion_epsilon = doc.value("adhesion_epsilon", 0.0);
    r.iterations = doc.at("iterations").get<int>();
    r.status = parse_plan_status(doc.at("status").get<std::string>());
    r.max_trajectory_step = doc.value("max_trajectory_step", 0.0);
    for (const json& c : doc.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                          c.at("tolerance").get<double>(), c.at("pass").get<bool>()});
    }
    if (doc.contains("worst")) {
      const json& w = doc.at("worst");
      r.worst_length_residual = w.at("length").at("value").get<double>();
      r.worst_length_joint = w.at("length").at("joint").get<int>();
      r.worst_wrinkle_residual = w.at("wrinkle").at("value").get<double>();
      r.worst_wrinkle_iteration = w.at("wrinkle").at("iteration").get<int>();
      r.worst_tension_residual = w.at("tension").at("value").get<double>();
      r.worst_tension_iteration = w.at("tension").at("iteration").get<int>();
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("verification report: ") + e.what());
  }
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "status      " << plan_status_name(report.status) << " after " << report.iterations << " iterations\n";
  out << "coverage    " << report.coverage_percent << " % (kinematic, epsilon = " << report.adhesion_epsilon
      << " m)\n";
  out << "max step    " << report.max_trajectory_step << " m\n";
  out << "worst       length " << report.worst_length_residual << " m @ joint " << report.worst_length_joint
      << ", wrinkle " << report.worst_wrinkle_residual << " @ iteration " << report.worst_wrinkle_iteration
      << ", tension " << report.worst_tension_residual << " m @ iteration " << report.worst_tension_iteration
      << "\n";
  for (const CheckResult& c : report.checks) {
    out << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << "  value=" << c.value << "  tolerance=" << c.tolerance
        << "\n";
  }
  out << (report.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

void emit_report(const VerificationReport& report, const std::filesystem::path& path, ReportFormat format) {
  const std::string payload = format == ReportFormat::kJson ? report_to_json(report) : report_to_text(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << payload;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace tapewrap
