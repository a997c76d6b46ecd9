#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "canetoads/config_io.hpp"
#include "canetoads/experiment.hpp"
#include "canetoads/io.hpp"

using namespace canetoads;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("canetoads_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_config() {
  RunConfig c;
  c.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 81, 41);
  return c;
}

}  // namespace

TEST(ParseConfig, MinimalGivesDefaults) {
  const RunConfig c = parse_config("[profile]\nkind = linear\n");
  EXPECT_TRUE(c == RunConfig{});
}

TEST(ParseConfig, ExponentNotation) {
  const RunConfig c = parse_config("[profile]\nkind = power_law\nexponent = 1.5e0\n[run]\nepsilon = 5E-2\n");
  EXPECT_EQ(c.profile.exponent(), 1.5);
  EXPECT_EQ(*c.epsilon, 0.05);
}

TEST(ParseConfig, ErrorsNameTheKey) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("[grid]\nn_x = 10\n").find("profile.kind"), std::string::npos);
  EXPECT_NE(message("[profile]\nkind = linear\ncolour = red\n").find("profile.colour"), std::string::npos);
  EXPECT_NE(message("[profile]\nkind = linear\n[grid]\ntheta_max = 0.2\n").find("grid.theta_max"), std::string::npos);
  EXPECT_NE(message("[profile]\nkind = linear\n[run]\nt_final = 1.0x\n").find("run.t_final"), std::string::npos);
  EXPECT_NE(message("[profile]\nkind = linear\n[run]\nt_final = 2\n").find("4/3"), std::string::npos);
  EXPECT_NE(message("[profile]\nkind = linear\n[extra]\na = 1\n").find("extra"), std::string::npos);
}

TEST(ParseConfig, RoundTrip) {
  std::vector<RunConfig> cases(4, RunConfig{});
  cases[1].profile = DiffusionProfile::power_law(0.7);
  cases[1].epsilon.reset();
  cases[1].region = ConvexRegion::polygon({{-0.5, 0.0}, {0.1, 0.0}, {0.0, 0.4}, {-0.4, 0.4}});
  cases[1].grid = HalfPlaneGrid(-3.0, 3.0, 3.0, 301, 151);
  cases[2].profile = DiffusionProfile::tabulated({0.0, 0.5, 1.0, 2.0}, {0.0, 0.4, 1.1, 2.3}, 1.0);
  cases[2].u0_ramp = RampKind::Cosine;
  cases[2].cap = 123.456;
  cases[2].tol.scheme = 3e-10;
  cases[3].profile = DiffusionProfile::oscillating_log();
  cases[3].epsilon = 0.1 / 3.0;
  cases[3].t_final = 0.6;
  cases[3].cadence = 0.3;
  for (const RunConfig& c : cases) {
    const RunConfig back = parse_config(serialize(c));
    EXPECT_TRUE(back == c) << serialize(c);
  }
}

TEST(Io, FieldRoundTrip) {
  const fs::path dir = scratch("io");
  ScalarField f(HalfPlaneGrid(-1.0, 1.0, 1.0, 5, 4), Quantity::J, 0.75);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = 0.1 * static_cast<double>(k) - 1.0 / 3.0;
  const fs::path p = dir / io::snapshot_name(Quantity::J, 0.75);
  io::write_field(p, f);
  EXPECT_EQ(p.filename().string(), "J_t0.750000.csv");
  const ScalarField g = io::read_field(p);
  EXPECT_EQ(g.values, f.values);
  EXPECT_EQ(g.time, 0.75);
  EXPECT_EQ(g.tag, Quantity::J);
  EXPECT_EQ(g.grid.n_x(), 5u);
}

TEST(RunExperiment, FrontConstantManifest) {
  Experiment e;
  e.kind = ExperimentKind::FrontConstant;
  e.config.epsilon.reset();
  e.output_dir = scratch("front");
  const Manifest m = run_experiment(e);
  const auto& met = m.json["metrics"];
  ASSERT_TRUE(met.contains("x_front_t1"));
  ASSERT_TRUE(met.contains("abs_x_front_minus_4_3"));
  EXPECT_NEAR(met["abs_x_front_minus_4_3"]["value"].get<double>(),
              std::abs(met["x_front_t1"].get<double>() - 4.0 / 3.0), 1e-15);
  EXPECT_EQ(m.json["seed"].get<std::uint64_t>(), e.seed);
  EXPECT_TRUE(fs::exists(m.dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(m.dir / "front_J_row0.csv"));
  EXPECT_EQ(m.dir.filename().string(), "front-constant-001");
}

TEST(RunExperiment, EpsSweepDecreasing) {
  Experiment e;
  e.kind = ExperimentKind::EpsSweep;
  e.config.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 101, 51);
  e.output_dir = scratch("eps");
  e.write_snapshots = false;
  const Manifest m = run_experiment(e);
  const auto& runs = m.json["metrics"]["runs"];
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_GT(runs[0]["sup_abs_v_minus_I"].get<double>(), runs[1]["sup_abs_v_minus_I"].get<double>());
  EXPECT_GT(runs[1]["sup_abs_v_minus_I"].get<double>(), runs[2]["sup_abs_v_minus_I"].get<double>());
  EXPECT_EQ(m.exit_status, 0);
}

TEST(RunExperiment, DeterministicAndAppendOnly) {
  Experiment e;
  e.kind = ExperimentKind::SolveHJ;
  e.config = small_config();
  e.output_dir = scratch("det");
  const Manifest a = run_experiment(e);
  const Manifest b = run_experiment(e);
  EXPECT_NE(a.dir, b.dir);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    if (entry.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b.dir / entry.path().filename())) << entry.path();
    ++compared;
  }
  EXPECT_GT(compared, 6u);
}

TEST(RunExperiment, ErrorsRecorded) {
  Experiment e;
  e.kind = ExperimentKind::SimulatePDE;
  e.config = small_config();
  e.config.epsilon.reset();  // reaction-diffusion needs a finite ε
  e.output_dir = scratch("err");
  const Manifest m = run_experiment(e);
  EXPECT_EQ(m.exit_status, 2);
  EXPECT_EQ(m.json["error"]["type"], "configuration");
  EXPECT_TRUE(fs::exists(m.dir / "manifest.json"));
}

TEST(RunExperiment, SimulateAndAction) {
  Experiment e;
  e.kind = ExperimentKind::SimulatePDE;
  e.config = small_config();
  e.config.t_final = 0.5;
  e.output_dir = scratch("sim");
  Manifest m = run_experiment(e);
  EXPECT_EQ(m.exit_status, 0);
  EXPECT_TRUE(fs::exists(m.dir / "u_t0.500000.csv"));
  e.kind = ExperimentKind::SolveAction;
  e.probes = {{1.0, 0.5, 1.0}};
  m = run_experiment(e);
  EXPECT_EQ(m.exit_status, 0);
  EXPECT_TRUE(fs::exists(m.dir / "trajectory_0.csv"));
}
