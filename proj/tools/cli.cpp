#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/fmt/chrono.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "tapewrap/error.hpp"
#include "tapewrap/mesh_io.hpp"
#include "tapewrap/planner.hpp"
#include "tapewrap/scene_export.hpp"
#include "tapewrap/trajectory_io.hpp"
#include "tapewrap/verifier.hpp"

namespace tapewrap::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kUsage =
    "usage: tapewrap <command> [options]\n"
    "\n"
    "commands:\n"
    "  gen-mesh      write a parametric fixture mesh\n"
    "  plan          plan a tape placement and write the trajectory\n"
    "  verify        audit a trajectory against a mesh\n"
    "  export-scene  write an OBJ scene with the tape ribbon\n"
    "  verify-mesh   load a mesh and run the convexity audit\n"
    "  sweep         run several plan configs in parallel\n"
    "\n"
    "Run `tapewrap <command> --help` for the options of a command.\n";

void configure_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("tapewrap");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  });
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("TAPEWRAP_LOG")) {
    const std::string name(env);
    if (name == "error" || name == "warn" || name == "info" || name == "debug") level = spdlog::level::from_str(name);
  }
  spdlog::set_level(level);
}

// Parse result: nullopt means parsing succeeded and the command should run.
std::optional<int> parse(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return std::nullopt;
}

int fail(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << '\n';
  return e.code() == ErrorCode::kInvalidSpec ? kExitUsage : kExitError;
}

Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

// ---------------------------------------------------------------------------
// Mesh source shared by every command that needs a surface.

struct MeshSource {
  std::string path;
  double scale = 1.0;
  std::string kind;
  MeshSpec spec;
};

void add_spec_options(CLI::App& app, MeshSpec& spec, std::string& kind, CLI::Option** kind_opt) {
  *kind_opt = app.add_option("--kind", kind, "plane | cylinder (leg) | hemisphere (hip) | heel_composite (heel)");
  app.add_option("--width", spec.width, "plane width along x [m]");
  app.add_option("--depth", spec.depth, "plane depth along y [m]");
  app.add_option("--radius", spec.radius, "cylinder / hemisphere radius [m]");
  app.add_option("--length", spec.length, "cylinder length [m]");
  app.add_option("--heel-radius", spec.heel_radius, "heel curvature radius [m]");
  app.add_option("--sole-length", spec.sole_length, "sole box length [m]");
  app.add_option("--ankle-radius", spec.ankle_radius, "ankle cylinder radius [m]");
  app.add_option("--resolution", spec.resolution, "facets per quarter turn (cells per side for plane)");
}

void add_mesh_source(CLI::App& app, MeshSource& source) {
  CLI::Option* kind_opt = nullptr;
  add_spec_options(app, source.spec, source.kind, &kind_opt);
  CLI::Option* mesh_opt = app.add_option("--mesh", source.path, "OBJ or binary STL surface");
  app.add_option("--scale", source.scale, "scale applied to mesh coordinates at load");
  mesh_opt->excludes(kind_opt);
  kind_opt->excludes(mesh_opt);
}

// Throws CLI::ValidationError (usage) when no source was given.
SurfaceMesh build_mesh(MeshSource source, ConvexifyMode mode) {
  if (!source.kind.empty()) {
    source.spec.kind = parse_mesh_kind(source.kind);
    return generate_mesh(source.spec);
  }
  if (source.path.empty()) throw CLI::ValidationError("mesh", "one of --mesh or --kind is required");
  return load_mesh(source.path, {source.scale, mode});
}

// ---------------------------------------------------------------------------
// plan

struct RunConfig {
  MeshSource mesh;
  std::vector<double> p_init{0.0, 0.0, 0.0};
  std::vector<double> d_init{1.0, 0.0, 0.0};
  double tape_length = 0.0;
  PlannerConfig planner;
  double angle_step_deg = 0.5;
  bool single_sided = false;
  std::string trajectory = "trajectory.json";
  std::string scene;
  std::string report;
  bool timestamp = false;
  int snapshot_stride = 0;
};

void add_plan_options(CLI::App& app, RunConfig& rc) {
  app.set_config("--config", "", "TOML file; keys mirror the long flag names");
  add_mesh_source(app, rc.mesh);
  app.add_option("--p-init", rc.p_init, "initial adhesion point x y z [m]")->expected(3)->required();
  app.add_option("--d-init", rc.d_init, "taping direction x y z")->expected(3)->required();
  app.add_option("--tape-length", rc.tape_length, "tape length [m]")->required()->check(CLI::PositiveNumber);
  app.add_option("--element-length", rc.planner.element_length, "element length [m]")->capture_default_str();
  app.add_option("--angle-step", rc.angle_step_deg, "rotation increment [deg]")->capture_default_str();
  app.add_option("--epsilon", rc.planner.epsilon, "adhesion threshold [m]")->capture_default_str();
  app.add_option("--residual", rc.planner.residual_distance, "offset along the tension direction [m]")
      ->capture_default_str();
  app.add_option("--max-iterations", rc.planner.max_iterations, "iteration guard, 0 = automatic");
  app.add_flag("--concave", rc.planner.concave_mode, "jump the front to the farthest contacting element");
  app.add_flag("--single-sided", rc.single_sided, "pin element 0 and advance one side only");
  app.add_flag("--penetration-contact,!--no-penetration-contact", rc.planner.penetration_counts_as_contact,
               "count elements inside the surface as adhered");
  app.add_option("--tape-width", rc.planner.tape_width, "ribbon width for scene export [m]");
  app.add_option("-o,--output", rc.trajectory, "trajectory JSON path")->capture_default_str();
  app.add_option("--scene", rc.scene, "also write an OBJ scene");
  app.add_option("--report", rc.report, "also write a JSON verification report");
  app.add_option("--snapshots", rc.snapshot_stride, "free-segment snapshot every N records in the scene");
  app.add_flag("--timestamp", rc.timestamp, "add a generation timestamp to the trajectory metadata");
}

struct PlanOutcome {
  PlanStatus status = PlanStatus::kComplete;
  int iterations = 0;
  int records = 0;
  std::optional<double> coverage;
};

PlanOutcome execute_plan(RunConfig rc) {
  rc.planner.angle_step = rc.angle_step_deg * kDegreesToRadians;
  if (rc.tape_length < 0.05 || rc.tape_length > 1.0) {
    spdlog::warn("tape length {} m is outside the usual 0.05-1.0 m band", rc.tape_length);
  }
  const ConvexifyMode mode = rc.planner.concave_mode ? ConvexifyMode::kNever : ConvexifyMode::kIfNeeded;
  const SurfaceMesh mesh = build_mesh(rc.mesh, mode);
  const Vec3 p = to_vec3(rc.p_init);
  const Vec3 d = to_vec3(rc.d_init);

  PlacementPlan plan = rc.single_sided ? plan_single_sided(mesh, p, d, rc.tape_length, rc.planner)
                                       : plan_bimanual(mesh, p, d, rc.tape_length, rc.planner);
  if (rc.planner.residual_distance > 0.0) plan = apply_residual(plan, rc.planner);

  TrajectoryMeta meta;
  if (rc.timestamp) {
    meta.timestamp = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
  }
  save_trajectory(plan, rc.trajectory, meta);

  PlanOutcome outcome{plan.status, plan.iterations, static_cast<int>(plan.records.size()), std::nullopt};
  try {
    const VerificationReport report = verify_plan(plan, mesh, rc.planner, Tolerances::defaults_for(rc.planner));
    outcome.coverage = report.coverage_percent;
    if (!rc.report.empty()) emit_report(report, rc.report, ReportFormat::kJson);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInconsistentPlan) throw;
    spdlog::warn("coverage unavailable: {}", e.what());
  }
  if (!rc.scene.empty()) export_scene(mesh, plan, {rc.planner.tape_width, rc.snapshot_stride}, rc.scene);
  return outcome;
}

void print_outcome(std::ostream& out, const PlanOutcome& o) {
  out << "iterations: " << o.iterations << "\nrecords: " << o.records
      << "\nstatus: " << plan_status_name(o.status) << "\ncoverage: ";
  if (o.coverage) {
    out << fmt::format("{:.2f}", *o.coverage) << " %\n";
  } else {
    out << "n/a\n";
  }
}

int cmd_plan(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan a bimanual tape placement", "tapewrap plan"};
  RunConfig rc;
  add_plan_options(app, rc);
  if (auto code = parse(app, args, out, err)) return *code;
  try {
    const PlanOutcome outcome = execute_plan(rc);
    print_outcome(out, outcome);
    return outcome.status == PlanStatus::kComplete ? kExitOk : kExitIncomplete;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

// ---------------------------------------------------------------------------
// gen-mesh

int cmd_gen_mesh(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Write a parametric fixture mesh", "tapewrap gen-mesh"};
  MeshSpec spec;
  std::string kind;
  std::string output;
  CLI::Option* kind_opt = nullptr;
  add_spec_options(app, spec, kind, &kind_opt);
  kind_opt->required();
  app.add_option("-o,--output", output, "OBJ or STL path")->required();
  if (auto code = parse(app, args, out, err)) return *code;
  try {
    spec.kind = parse_mesh_kind(kind);
    const SurfaceMesh mesh = generate_mesh(spec);
    save_mesh(mesh, output);
    out << "wrote " << output << " (" << mesh.vertices().size() << " vertices, " << mesh.triangles().size()
        << " faces)\n";
    return kExitOk;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit a trajectory against a mesh", "tapewrap verify"};
  MeshSource source;
  std::string plan_path;
  std::string report_path;
  std::string format = "json";
  add_mesh_source(app, source);
  app.add_option("--plan", plan_path, "trajectory JSON")->required();
  app.add_option("--report", report_path, "report output path");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  if (auto code = parse(app, args, out, err)) return *code;
  try {
    const PlacementPlan plan = load_trajectory(plan_path);
    const ConvexifyMode mode = plan.config.concave_mode ? ConvexifyMode::kNever : ConvexifyMode::kIfNeeded;
    const SurfaceMesh mesh = build_mesh(source, mode);
    const VerificationReport report = verify_plan(plan, mesh, plan.config, Tolerances::defaults_for(plan.config));
    if (!report_path.empty()) {
      emit_report(report, report_path, format == "text" ? ReportFormat::kText : ReportFormat::kJson);
    }
    out << report_to_text(report);
    return report.pass() ? kExitOk : kExitError;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

// ---------------------------------------------------------------------------
// export-scene

int cmd_export_scene(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Write an OBJ scene with the surface and tape ribbon", "tapewrap export-scene"};
  MeshSource source;
  std::string plan_path;
  std::string output;
  double width = 0.0;
  int stride = 0;
  add_mesh_source(app, source);
  app.add_option("--plan", plan_path, "trajectory JSON")->required();
  app.add_option("-o,--output", output, "scene OBJ path")->required();
  app.add_option("--tape-width", width, "ribbon width [m], defaults to the plan's");
  app.add_option("--snapshots", stride, "free-segment snapshot every N records");
  if (auto code = parse(app, args, out, err)) return *code;
  try {
    const PlacementPlan plan = load_trajectory(plan_path);
    const ConvexifyMode mode = plan.config.concave_mode ? ConvexifyMode::kNever : ConvexifyMode::kIfNeeded;
    const SurfaceMesh mesh = build_mesh(source, mode);
    const SceneOptions options{width > 0.0 ? width : plan.config.tape_width, stride};
    const SceneSummary summary = export_scene(mesh, plan, options, output);
    out << "wrote " << output << " (ribbon quads " << summary.ribbon_quads << ", snapshots " << summary.snapshots
        << ")\n";
    return kExitOk;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

// ---------------------------------------------------------------------------
// verify-mesh

int cmd_verify_mesh(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Load a mesh and run the convexity audit", "tapewrap verify-mesh"};
  std::string path;
  double scale = 1.0;
  app.add_option("mesh", path, "OBJ or binary STL")->required();
  app.add_option("--scale", scale, "scale applied at load");
  if (auto code = parse(app, args, out, err)) return *code;
  try {
    const SurfaceMesh mesh = load_mesh(path, {scale, ConvexifyMode::kNever});
    const double violation = convexity_violation(mesh);
    const bool ok = violation <= kConvexityTolerance;
    out << "vertices: " << mesh.vertices().size() << "\nfaces: " << mesh.triangles().size()
        << "\nconvexity_violation: " << violation << "\nconvex: " << (ok ? "yes" : "no") << '\n';
    return ok ? kExitOk : kExitError;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepJob {
  std::string name;
  RunConfig config;
  int code = kExitOk;
  PlanOutcome outcome;
  std::string message;
};

int cmd_sweep(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run several plan configs in parallel", "tapewrap sweep"};
  std::vector<std::string> configs;
  std::string output_dir = ".";
  app.add_option("configs", configs, "TOML run configs")->required()->check(CLI::ExistingFile);
  app.add_option("--output-dir", output_dir, "directory for <config stem>.json trajectories");
  if (auto code = parse(app, args, out, err)) return *code;

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    err << "error: cannot create " << output_dir << ": " << ec.message() << '\n';
    return kExitError;
  }

  // Configs are parsed serially; only the planning fans out.
  std::map<std::string, SweepJob> by_name;
  for (const std::string& path : configs) {
    SweepJob job;
    job.name = fs::path(path).stem().string();
    if (by_name.count(job.name)) {
      err << "error: duplicate config name " << job.name << '\n';
      return kExitUsage;
    }
    CLI::App job_app{"sweep job"};
    add_plan_options(job_app, job.config);
    const std::string trajectory = (fs::path(output_dir) / (job.name + ".json")).string();
    if (auto code = parse(job_app, {"--config", path, "--output", trajectory}, out, err)) {
      err << "error: invalid config " << path << '\n';
      return *code == kExitOk ? kExitUsage : *code;
    }
    by_name.emplace(job.name, std::move(job));
  }

  std::vector<SweepJob*> jobs;
  for (auto& [name, job] : by_name) jobs.push_back(&job);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    SweepJob& job = *jobs[k];
    try {
      job.outcome = execute_plan(job.config);
      job.code = job.outcome.status == PlanStatus::kComplete ? kExitOk : kExitIncomplete;
    } catch (const CLI::ValidationError& e) {
      job.code = kExitUsage;
      job.message = e.what();
    } catch (const std::exception& e) {
      job.code = kExitError;
      job.message = e.what();
    }
  }

  int worst = kExitOk;
  for (const SweepJob* job : jobs) {
    out << job->name << ": ";
    if (!job->message.empty()) {
      out << "error: " << job->message << '\n';
    } else {
      out << plan_status_name(job->outcome.status) << ", iterations " << job->outcome.iterations << ", coverage "
          << (job->outcome.coverage ? fmt::format("{:.2f} %", *job->outcome.coverage) : std::string("n/a"))
          << '\n';
    }
    if (job->code == kExitError || job->code == kExitUsage) {
      worst = kExitError;
    } else if (job->code == kExitIncomplete && worst == kExitOk) {
      worst = kExitIncomplete;
    }
  }
  return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::string& command = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (command == "-h" || command == "--help" || command == "help") {
    out << kUsage;
    return kExitOk;
  }
  if (command == "gen-mesh") return cmd_gen_mesh(rest, out, err);
  if (command == "plan") return cmd_plan(rest, out, err);
  if (command == "verify") return cmd_verify(rest, out, err);
  if (command == "export-scene") return cmd_export_scene(rest, out, err);
  if (command == "verify-mesh") return cmd_verify_mesh(rest, out, err);
  if (command == "sweep") return cmd_sweep(rest, out, err);
  err << "unknown command '" << command << "'\n\n" << kUsage;
  return kExitUsage;
}

}  // namespace tapewrap::cli
