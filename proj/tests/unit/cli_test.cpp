#include "commands.hpp"

#include "gvf/report.hpp"
#include "gvf/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gvf::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gvf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string scenario(const std::string& name) {
    return std::string(GVF_SCENARIO_DIR) + "/" + name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kShort = R"(
[path]
type = circle
r = 100
[vehicle]
kind = unicycle
v = 15
x0 = 150
y0 = 0
theta0 = 1.5707963267948966
[gains]
k_phi = 0.25
k_theta = 0.6
[sim]
t_final = 10
t_p = 8
)";

TEST_F(CliTest, RunWritesTraceAndSummary) {
  const std::string cfg = write("short.cfg", kShort);
  ASSERT_EQ(cmd_run(cfg, (dir_ / "out").string(), out_, err_), kOk) << err_.str();
  const std::string csv = slurp(dir_ / "out" / "trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t,px,py,theta,phi_1,phi_pred_1,u_phi_1,vt_norm,vc_norm,alpha,saturated,omega,"
            "theta_dot_c,lyapunov_v,ground_speed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1002);
  const std::string summary = slurp(dir_ / "out" / "summary.txt");
  EXPECT_NE(summary.find("settling_time"), std::string::npos);
  EXPECT_NE(summary.find("max_overshoot"), std::string::npos);
  EXPECT_NE(summary.find("steady_state_error"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorExitsOneAndNamesKey) {
  std::string bad = kShort;
  bad.replace(bad.find("r = 100"), 7, "r = -1");
  const std::string cfg = write("bad.cfg", bad);
  EXPECT_EQ(cmd_run(cfg, (dir_ / "out").string(), out_, err_), kConfigError);
  EXPECT_NE(err_.str().find("path.r"), std::string::npos);
  std::ostringstream err2;
  EXPECT_EQ(cmd_validate(cfg, out_, err2), kConfigError);
  EXPECT_NE(err2.str().find("path.r"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "trace.csv"));
}

TEST_F(CliTest, MissingFileIsConfigError) {
  EXPECT_EQ(cmd_validate((dir_ / "nope.cfg").string(), out_, err_), kConfigError);
}

TEST_F(CliTest, SingularStartExitsTwoButValidates) {
  std::string text = kShort;
  text.replace(text.find("x0 = 150"), 8, "x0 = 0");
  const std::string cfg = write("center.cfg", text);
  EXPECT_EQ(cmd_validate(cfg, out_, err_), kOk);
  EXPECT_NE(err_.str().find("rank-deficient start"), std::string::npos);
  EXPECT_EQ(cmd_run(cfg, (dir_ / "out").string(), out_, err_), kSimulationError);
}

TEST_F(CliTest, ValidateAndRunAgreeOnMalformedInputs) {
  const std::vector<std::pair<std::string, std::string>> edits = {
      {"k_theta = 0.6", "k_theta = -0.6"}, {"v = 15", "v = 0"},
      {"type = circle", "type = blob"},   {"t_final = 10", "t_final = 0.001"},
      {"k_phi = 0.25", "k_phi = 0.25\nunknown = 1"}, {"x0 = 150", "x0 = 1e999"},
      {"k_theta = 0.6", "k_theta = 0.9"},  // valid control case
  };
  for (const auto& [from, to] : edits) {
    std::string text = kShort;
    text.replace(text.find(from), from.size(), to);
    const std::string cfg = write("edit.cfg", text);
    std::ostringstream o, e;
    const int v = cmd_validate(cfg, o, e);
    const int r = cmd_run(cfg, (dir_ / "out").string(), o, e);
    EXPECT_EQ(v == kOk, r == kOk) << to;
    if (v != kOk) EXPECT_EQ(r, kConfigError) << to;
  }
}

TEST_F(CliTest, SweepWritesAggregate) {
  const std::string cfg = write("short.cfg", kShort);
  const auto values = split_values("0.4, 0.8,1.2");
  ASSERT_EQ(values.size(), 3u);
  ASSERT_EQ(cmd_sweep(cfg, "gains.k_theta", values, (dir_ / "sweep").string(), out_, err_), kOk)
      << err_.str();
  const std::string agg = slurp(dir_ / "sweep" / "aggregate.csv");
  EXPECT_EQ(agg.substr(0, agg.find('\n')), "value,settling_time,max_abs_phi,final_v,status");
  EXPECT_EQ(std::count(agg.begin(), agg.end(), '\n'), 4);
  EXPECT_TRUE(fs::exists(dir_ / "sweep" / "gains.k_theta=0.8" / "trace.csv"));
}

TEST_F(CliTest, SingleValueSweepMatchesRun) {
  const std::string cfg = write("short.cfg", kShort);
  ASSERT_EQ(cmd_run(cfg, (dir_ / "run").string(), out_, err_), kOk);
  ASSERT_EQ(cmd_sweep(cfg, "gains.k_theta", {"0.6"}, (dir_ / "sweep").string(), out_, err_), kOk);
  EXPECT_EQ(slurp(dir_ / "run" / "trace.csv"),
            slurp(dir_ / "sweep" / "gains.k_theta=0.6" / "trace.csv"));
}

TEST_F(CliTest, SweepBadParameterIsConfigError) {
  const std::string cfg = write("short.cfg", kShort);
  EXPECT_EQ(cmd_sweep(cfg, "gains.k_zeta", {"1"}, (dir_ / "s").string(), out_, err_), kConfigError);
  EXPECT_NE(err_.str().find("gains.k_zeta"), std::string::npos);
  EXPECT_EQ(cmd_sweep(cfg, "gains.k_theta", {"-1"}, (dir_ / "s").string(), out_, err_),
            kConfigError);
  EXPECT_EQ(cmd_sweep(cfg, "gains.k_theta", {}, (dir_ / "s").string(), out_, err_), kConfigError);
}

TEST_F(CliTest, SweepWindMeanGrowsTrackingError) {
  std::string text = std::string(kShort) + "\n[wind]\nmode = constant\nmean = 0, 0\n";
  text.replace(text.find("t_final = 10"), 12, "t_final = 80");
  const std::string cfg = write("wind.cfg", text);
  ASSERT_EQ(cmd_sweep(cfg, "wind.mean", {"0", "4"}, (dir_ / "w").string(), out_, err_), kOk)
      << err_.str();
  const Scenario calm = load_scenario_file(cfg);
  EXPECT_EQ(calm.config.wind.mean, Eigen::Vector2d::Zero());
  std::istringstream agg(slurp(dir_ / "w" / "aggregate.csv"));
  std::string header, calm_row, windy_row;
  std::getline(agg, header);
  std::getline(agg, calm_row);
  std::getline(agg, windy_row);
  auto field = [](const std::string& row, int idx) {
    std::stringstream ss(row);
    std::string cell;
    for (int i = 0; i <= idx; ++i) std::getline(ss, cell, ',');
    return std::stod(cell);
  };
  EXPECT_GT(field(windy_row, 2), field(calm_row, 2));
}

TEST(SweepThreads, RespectsEnvironmentCap) {
  ::setenv("GVF_LAB_THREADS", "2", 1);
  EXPECT_EQ(sweep_threads(10), 2u);
  EXPECT_EQ(sweep_threads(1), 1u);
  ::setenv("GVF_LAB_THREADS", "garbage", 1);
  EXPECT_GE(sweep_threads(10), 1u);
  ::unsetenv("GVF_LAB_THREADS");
}

}  // namespace
}  // namespace gvf::cli
