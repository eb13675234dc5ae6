#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"
#include "tapewrap/trajectory_io.hpp"

namespace tapewrap {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::stringstream s;
  s << std::ifstream(p, std::ios::binary).rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = test::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }
  fs::path dir_;
};

const char* kLegConfig =
    "kind = \"cylinder\"\n"
    "radius = 0.05\n"
    "length = 0.4\n"
    "p-init = [0.05, 0.0, 0.0]\n"
    "d-init = [0.0, 1.0, 0.0]\n"
    "tape-length = 0.15\n";

const char* kPlaneConfig =
    "kind = \"plane\"\n"
    "p-init = [0.0, 0.0, 0.01]\n"
    "d-init = [1.0, 0.0, 0.0]\n"
    "tape-length = 0.15\n"
    "angle-step = 0.5\n";

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"plan", "--help"}).code, 0);
  EXPECT_EQ(run({"plan", "--bogus"}).code, 2);
  EXPECT_EQ(run({"plan", "--p-init", "0", "0", "0", "--d-init", "1", "0", "0", "--tape-length", "0.15",
                 "-o", path("t.json")})
                .code,
            2);  // no mesh source
  EXPECT_EQ(run({"plan", "--kind", "plane", "--mesh", "x.obj", "--p-init", "0", "0", "0", "--d-init", "1", "0",
                 "0", "--tape-length", "0.15"})
                .code,
            2);
}

TEST_F(Cli, GenMeshAndVerifyMesh) {
  const CliRun gen = run({"gen-mesh", "--kind", "cylinder", "--radius", "0.05", "--length", "0.4", "--resolution",
                       "32", "-o", path("leg.obj")});
  EXPECT_EQ(gen.code, 0) << gen.err;
  EXPECT_TRUE(fs::exists(path("leg.obj")));
  const CliRun audit = run({"verify-mesh", path("leg.obj")});
  EXPECT_EQ(audit.code, 0) << audit.out;
  EXPECT_NE(audit.out.find("convex: yes"), std::string::npos);
}

TEST_F(Cli, GenMeshRejectsNegativeWidth) {
  const CliRun r = run({"gen-mesh", "--kind", "plane", "--width", "-1", "-o", path("p.obj")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("width"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("p.obj")));
}

TEST_F(Cli, VerifyMeshFlagsConcaveFile) {
  write("trench.obj", format_obj(test::trench_mesh()));
  const CliRun r = run({"verify-mesh", path("trench.obj")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("convex: no"), std::string::npos);
}

TEST_F(Cli, PlanPlaneFromConfig) {
  const CliRun r = run({"plan", "--config", write("plane.toml", kPlaneConfig), "-o", path("plane.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("iterations: 15"), std::string::npos);
  EXPECT_EQ(load_trajectory(path("plane.json")).records.size(), 15u);
}

TEST_F(Cli, PlanLegReportsFullCoverage) {
  const CliRun r = run({"plan", "--config", write("leg.toml", kLegConfig), "-o", path("leg.json"), "--report",
                     path("report.json"), "--scene", path("scene.obj")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("coverage: 100.00 %"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("status: complete"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("report.json")));
  EXPECT_TRUE(fs::exists(path("scene.obj")));
  EXPECT_EQ(load_trajectory(path("leg.json")).residual_applied, 0.003);
}

TEST_F(Cli, FlagsOverrideConfig) {
  const std::string cfg = write("leg.toml", kLegConfig);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("a.json")}).code, 0);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("b.json"), "--angle-step", "1.0", "--residual", "0"}).code, 0);
  const PlacementPlan a = load_trajectory(path("a.json"));
  const PlacementPlan b = load_trajectory(path("b.json"));
  EXPECT_NEAR(b.config.angle_step, 1.0 * kDegreesToRadians, 1e-15);
  EXPECT_NEAR(a.config.angle_step, 0.5 * kDegreesToRadians, 1e-15);
  EXPECT_EQ(b.residual_applied, 0.0);
  EXPECT_LT(b.iterations, a.iterations);
}

TEST_F(Cli, SingleSidedAndConcaveVariants) {
  const std::string cfg = write("plane.toml", kPlaneConfig);
  const CliRun single = run({"plan", "--config", cfg, "--single-sided", "-o", path("s.json")});
  ASSERT_EQ(single.code, 0) << single.err;
  EXPECT_EQ(load_trajectory(path("s.json")).iterations, 29);
  const CliRun concave = run({"plan", "--config", cfg, "--concave", "-o", path("c.json")});
  ASSERT_EQ(concave.code, 0) << concave.err;
  EXPECT_TRUE(load_trajectory(path("c.json")).config.concave_mode);
}

TEST_F(Cli, OverhangExitsIncompleteWithPartialTrajectory) {
  write("cube.obj", format_obj(test::overhang_cube()));
  const CliRun r = run({"plan", "--mesh", path("cube.obj"), "--p-init", "0", "0", "0.01", "--d-init", "1", "0", "0",
                     "--tape-length", "0.15", "--no-penetration-contact", "--max-iterations", "200", "-o",
                     path("partial.json")});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.out.find("max_iterations_exceeded"), std::string::npos);
  const PlacementPlan partial = load_trajectory(path("partial.json"));
  EXPECT_EQ(partial.status, PlanStatus::kMaxIterationsExceeded);
  EXPECT_EQ(partial.records.size(), 200u);
}

TEST_F(Cli, PlanningErrorsNameTheError) {
  const CliRun r = run({"plan", "--kind", "plane", "--p-init", "0", "0", "0", "--d-init", "0", "0", "1",
                     "--tape-length", "0.15", "-o", path("x.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("InvalidDirection"), std::string::npos);
  const CliRun missing = run({"plan", "--mesh", path("nope.obj"), "--p-init", "0", "0", "0", "--d-init", "1", "0",
                           "0", "--tape-length", "0.15", "-o", path("x.json")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("FileNotFound"), std::string::npos);
}

TEST_F(Cli, VerifyPassAndTamper) {
  ASSERT_EQ(run({"gen-mesh", "--kind", "cylinder", "-o", path("leg.obj")}).code, 0);
  const std::string cfg = write("leg.toml", kLegConfig);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("leg.json")}).code, 0);
  const CliRun ok = run({"verify", "--mesh", path("leg.obj"), "--plan", path("leg.json"), "--report",
                      path("report.txt"), "--format", "text"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_TRUE(fs::exists(path("report.txt")));

  PlacementPlan plan = load_trajectory(path("leg.json"));
  plan.records[30].end.position += Vec3(0.005, 0, 0);
  save_trajectory(plan, path("tampered.json"));
  const CliRun bad = run({"verify", "--mesh", path("leg.obj"), "--plan", path("tampered.json"), "--report",
                       path("bad.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL  continuity"), std::string::npos) << bad.out;
  EXPECT_NE(slurp(path("bad.json")).find("\"continuity\""), std::string::npos);

  const CliRun missing = run({"verify", "--mesh", path("gone.obj"), "--plan", path("leg.json")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("FileNotFound"), std::string::npos);
}

TEST_F(Cli, ExportScene) {
  const std::string cfg = write("leg.toml", kLegConfig);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("leg.json")}).code, 0);
  const CliRun r = run({"export-scene", "--kind", "cylinder", "--plan", path("leg.json"), "-o", path("scene.obj"),
                     "--snapshots", "10"});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string scene = slurp(path("scene.obj"));
  EXPECT_NE(scene.find("o tape_ribbon"), std::string::npos);
  EXPECT_NE(scene.find("o free_end_1"), std::string::npos);
}

TEST_F(Cli, DeterministicTrajectories) {
  const std::string cfg = write("leg.toml", kLegConfig);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("a.json")}).code, 0);
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("b.json")}).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  ASSERT_EQ(run({"plan", "--config", cfg, "-o", path("c.json"), "--timestamp"}).code, 0);
  const std::string stamped = slurp(path("c.json"));
  EXPECT_NE(stamped.find("\"timestamp\""), std::string::npos);
  const std::regex stamp(",\\s*\"timestamp\": \"[^\"]*\"");
  EXPECT_EQ(std::regex_replace(stamped, stamp, ""), slurp(path("a.json")));
}

TEST_F(Cli, SweepMergesByFilename) {
  write("leg.toml", kLegConfig);
  write("plane.toml", kPlaneConfig);
  const CliRun r = run({"sweep", path("plane.toml"), path("leg.toml"), "--output-dir", path("out")});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "leg.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "plane.json"));
  EXPECT_LT(r.out.find("leg:"), r.out.find("plane:"));

  // Sweep output matches a standalone run of the same config.
  ASSERT_EQ(run({"plan", "--config", path("leg.toml"), "-o", path("solo.json")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "out" / "leg.json"), slurp(path("solo.json")));
}

TEST_F(Cli, SweepReportsIncompleteJobs) {
  write("cube.obj", format_obj(test::overhang_cube()));
  write("over.toml", "mesh = \"" + path("cube.obj") +
                         "\"\np-init = [0, 0, 0.01]\nd-init = [1, 0, 0]\ntape-length = 0.15\n"
                         "penetration-contact = false\nmax-iterations = 50\n");
  write("plane.toml", kPlaneConfig);
  const CliRun r = run({"sweep", path("over.toml"), path("plane.toml"), "--output-dir", path("out")});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_NE(r.out.find("over: max_iterations_exceeded"), std::string::npos);
}

}  // namespace
}  // namespace tapewrap
