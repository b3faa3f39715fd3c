#include "config.hpp"
#include "output.hpp"
#include "run.hpp"

#include "crowdflow/mesh_io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace crowdflow;
using namespace crowdflow::cli;
namespace fs = std::filesystem;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("crowdflow_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

const char* kCorridor = R"({
  "mode": "solve2d", "epsilon": 0.1, "tol": 1e-6,
  "geometry": {"type": "corridor", "nx": 8, "ny": 4,
    "doors": [
      {"side": "left", "y": [0.5, 1.0], "tag": "in1", "rate": 0.2},
      {"side": "left", "y": [0.0, 0.5], "tag": "in2", "rate": 0.4},
      {"side": "right", "y": [0.5, 1.0], "tag": "out1", "rate": 0.4},
      {"side": "right", "y": [0.0, 0.5], "tag": "out2", "rate": 0.2}]},
  "velocity": {"type": "harmonic"}
})";

}  // namespace

TEST(Config, Solve1dDefaults) {
  const auto c = parse_config(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.5,"beta":0.5,"cells":200})");
  EXPECT_EQ(c.mode, Mode::Solve1D);
  EXPECT_DOUBLE_EQ(c.model.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(c.model.tau, 0.01);
  EXPECT_DOUBLE_EQ(c.model.initial_density, 0.5);
  EXPECT_DOUBLE_EQ(c.solver.penalty.eta, 10.0);
  EXPECT_DOUBLE_EQ(c.solver.tol, 1e-8);
  EXPECT_EQ(std::get<IntervalSpec>(c.geometry).cells, 200);
  ASSERT_EQ(c.model.segments.size(), 2u);
  EXPECT_DOUBLE_EQ(c.model.find_segment("inflow")->rate, 0.5);
  EXPECT_TRUE(std::holds_alternative<ConstantVelocity>(c.model.velocity));
}

TEST(Config, ValidationErrorsNameTheKey) {
  EXPECT_EQ(error_path(R"({"mode":"solve1d","epsilon":0.1,"alpha":1.5,"beta":0.5})"), "alpha");
  EXPECT_EQ(error_path(R"({"mode":"solve1d","alpha":0.5,"beta":0.5})"), "epsilon");
  EXPECT_EQ(error_path(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.5})"), "beta");
  EXPECT_EQ(error_path(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.5,"beta":0.5,"colour":1})"), "colour");
  EXPECT_EQ(error_path(R"({"mode":"fly","epsilon":0.1})"), "mode");
  EXPECT_EQ(error_path(R"({"mode":"solve1d","epsilon":"x","alpha":0.5,"beta":0.5})"), "epsilon");
  EXPECT_EQ(error_path(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.5,"beta":0.5,"cells":0})"), "cells");
  EXPECT_EQ(error_path(R"({"mode":"phase","epsilon":0.1,"step":0.9})"), "step");
  std::string bad_rate = kCorridor;
  bad_rate.replace(bad_rate.find("\"rate\": 0.4"), 11, "\"rate\": 1.4");
  EXPECT_EQ(error_path(bad_rate), "geometry.doors[1].rate");
  std::string bad_key = kCorridor;
  bad_key.replace(bad_key.find("\"side\": \"left\""), 14, "\"sied\": \"left\"");
  EXPECT_EQ(error_path(bad_key), "geometry.doors[0].side");
  EXPECT_EQ(error_path(R"({"mode":"solve2d","epsilon":0.1,"geometry":{"type":"corridor"}})"),
            "geometry.doors");
  EXPECT_EQ(error_path("{not json"), "");
  EXPECT_EQ(error_path(R"({"mode":"solve2d","epsilon":0.1,"geometry":{"type":"corridor","nx":4,"ny":2,"doors":[]},"velocity":{"type":"spiral"}})"),
            "velocity.type");
}

TEST(Config, CorridorAndObstacle) {
  const auto c = parse_config(kCorridor);
  EXPECT_EQ(c.mode, Mode::Solve2D);
  const auto& g = std::get<CorridorSpec>(c.geometry);
  EXPECT_EQ(g.nx, 8);
  ASSERT_EQ(g.doors.size(), 4u);
  EXPECT_EQ(g.doors[2].side, Side::Right);
  EXPECT_EQ(c.model.find_segment("out1")->kind, SegmentKind::Outflow);
  EXPECT_NE(c.model.find_segment("wall"), nullptr);
  EXPECT_TRUE(std::holds_alternative<HarmonicPotentialVelocity>(c.model.velocity));

  const auto o = parse_config(R"({"mode":"mesh","geometry":{"type":"obstacle","obstacle":{"center":[1,0.5],"radius":0.1}}})");
  const auto& spec = std::get<CorridorWithObstacleSpec>(o.geometry);
  EXPECT_DOUBLE_EQ(spec.obstacle.radius, 0.1);
  EXPECT_EQ(spec.corridor.doors.size(), 4u);
}

TEST(Output, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(std::stod(format_number(0.123456789012345678)), 0.123456789012346);
}

TEST(Output, VtkLayout) {
  CorridorSpec spec;
  spec.nx = 2;
  spec.ny = 1;
  const Mesh mesh = build_corridor_mesh(spec);
  const auto rho = DgFunction::constant(mesh, 0.25);
  const auto vel = resolve_constant(mesh, {1.0, 0.0});
  std::ostringstream out;
  write_vtk(rho, vel, out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(s.find("ASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS 12 double\n"), std::string::npos);
  EXPECT_NE(s.find("CELLS 4 16\n3 0 1 2\n"), std::string::npos);
  EXPECT_NE(s.find("CELL_TYPES 4\n5\n"), std::string::npos);
  EXPECT_NE(s.find("POINT_DATA 12\nSCALARS rho double 1\nLOOKUP_TABLE default\n0.25\n"), std::string::npos);
  EXPECT_NE(s.find("SCALARS potential double 1"), std::string::npos);
  EXPECT_NE(s.find("CELL_DATA 4\nVECTORS velocity double\n1 0 0\n"), std::string::npos);
}

TEST(Run, Solve1dWritesDeterministicOutputs) {
  TempDir dir;
  auto cfg = parse_config(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.2,"beta":0.4,"cells":20})");
  cfg.output.path = (dir.path() / "a").string();
  std::ostringstream log;
  EXPECT_EQ(run(cfg, log), kExitConverged);
  cfg.output.path = (dir.path() / "b").string();
  EXPECT_EQ(run(cfg, log), kExitConverged);
  const std::string csv = slurp(dir.path() / "a" / "profile.csv");
  EXPECT_EQ(csv, slurp(dir.path() / "b" / "profile.csv"));
  EXPECT_EQ(csv.rfind("x,rho,j\n0,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "a" / "report.json"));
  EXPECT_TRUE(report["solve"]["converged"].get<bool>());
  EXPECT_LT(report["solve"]["flux"]["balance_residual"].get<double>(), 1e-6);
  EXPECT_EQ(report["phase"], "influx_limited");
  EXPECT_TRUE(report["estimates"]["all_pass"].get<bool>());
}

TEST(Run, NonConvergenceExitCode) {
  TempDir dir;
  auto cfg = parse_config(R"({"mode":"solve1d","epsilon":0.1,"alpha":0.2,"beta":0.4,"cells":20,"max_iter":2})");
  cfg.output.path = dir.path().string();
  std::ostringstream log;
  EXPECT_EQ(run(cfg, log), kExitNotConverged);
  EXPECT_FALSE(nlohmann::json::parse(slurp(dir.path() / "report.json"))["solve"]["converged"].get<bool>());
}

TEST(Run, Solve2dVtkWithinBounds) {
  TempDir dir;
  auto cfg = parse_config(kCorridor);
  cfg.output.path = dir.path().string();
  std::ostringstream log;
  ASSERT_EQ(run(cfg, log), kExitConverged);
  const std::string vtk = slurp(dir.path() / "solution.vtk");
  std::istringstream in(vtk.substr(vtk.find("LOOKUP_TABLE default\n") + 21));
  double v;
  int count = 0;
  for (int i = 0; i < 3 * 64 && in >> v; ++i, ++count) {
    EXPECT_GE(v, 0.2 - 1e-3);
    EXPECT_LE(v, 0.8 + 1e-3);
  }
  EXPECT_EQ(count, 3 * 64);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "report.json"));
  EXPECT_TRUE(report["estimates"]["density_bounds"]["applicable"].get<bool>());
  EXPECT_LT(report["velocity"]["divergence_residual"].get<double>(), 1e-10);
}

TEST(Run, AnalyticAndMesh) {
  TempDir dir;
  auto cfg = parse_config(R"({"mode":"analytic","epsilon":0.1,"alpha":0.7,"beta":0.7})");
  cfg.output.path = dir.path().string();
  std::ostringstream log;
  ASSERT_EQ(run(cfg, log), kExitConverged);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "report.json"));
  EXPECT_EQ(report["profile"]["branch"], "trigonometric");
  EXPECT_LT(report["profile"]["outflow_residual"].get<double>(), 1e-10);
  EXPECT_EQ(slurp(dir.path() / "boundary.csv").rfind("alpha,beta,side\n", 0), 0u);

  auto m = parse_config(R"({"mode":"mesh","geometry":{"type":"corridor","nx":6,"ny":3}})");
  m.output.path = (dir.path() / "c.mesh").string();
  ASSERT_EQ(run(m, log), kExitConverged);
  const Mesh mesh = read_mesh(dir.path() / "c.mesh");
  EXPECT_EQ(mesh.num_cells(), 36u);
  EXPECT_GE(mesh.tag_id("in1"), 0);
}

TEST(Run, AnalyticBranches) {
  TempDir dir;
  std::ostringstream log;
  for (auto [a, b, branch] : {std::tuple{0.3, 0.7, "constant"}, {0.2, 0.4, "hyperbolic"},
                              {0.8, 0.3, "hyperbolic"}}) {
    nlohmann::json doc = {{"mode", "analytic"}, {"epsilon", 0.1}, {"alpha", a}, {"beta", b}};
    auto cfg = parse_config(doc.dump());
    cfg.output.path = dir.path().string();
    ASSERT_EQ(run(cfg, log), kExitConverged);
    const auto report = nlohmann::json::parse(slurp(dir.path() / "report.json"));
    EXPECT_EQ(report["profile"]["branch"], branch) << a << ' ' << b;
    EXPECT_LT(report["profile"]["inflow_residual"].get<double>(), 1e-8);
    EXPECT_LT(report["profile"]["outflow_residual"].get<double>(), 1e-8);
  }
}
