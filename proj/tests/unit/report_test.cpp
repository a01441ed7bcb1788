#include "gvf/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace gvf {
namespace {

Trace tiny_trace(VehicleKind kind, int dim, bool behavior) {
  Trace t;
  t.kind = kind;
  t.dimension = dim;
  t.has_behavior = behavior;
  for (int i = 0; i <= 4; ++i) {
    TraceRecord r;
    r.t = 0.5 * i;
    r.position = Eigen::VectorXd::Constant(dim, 1.0 / 3.0);
    r.phi = Eigen::VectorXd::Constant(dim - 1, 0.2 / (1 + i) - 0.01 * (i == 3));
    r.phi_predicted = Eigen::VectorXd::Zero(dim - 1);
    r.gamma = Eigen::VectorXd::Zero(dim - 1);
    r.u_phi = -0.25 * r.phi;
    r.ground_speed = 15.0;
    t.records.push_back(r);
  }
  return t;
}

std::string header_of(const Trace& t) {
  std::ostringstream out;
  write_trace_csv(t, out);
  return out.str().substr(0, out.str().find('\n'));
}

TEST(TraceColumns, UnicycleWithBehavior) {
  EXPECT_EQ(header_of(tiny_trace(VehicleKind::kUnicycle, 2, true)),
            "t,px,py,theta,phi_1,phi_pred_1,gamma_1,u_phi_1,vt_norm,vc_norm,alpha,saturated,"
            "omega,theta_dot_c,lyapunov_v,ground_speed");
}

TEST(TraceColumns, SingleIntegratorIn3D) {
  EXPECT_EQ(header_of(tiny_trace(VehicleKind::kSingleIntegrator, 3, false)),
            "t,px,py,pz,phi_1,phi_2,phi_pred_1,phi_pred_2,u_phi_1,u_phi_2,vt_norm,vc_norm,"
            "ground_speed");
}

TEST(TraceColumns, SchemaDependsOnlyOnKindAndBehavior) {
  Trace a = tiny_trace(VehicleKind::kUnicycle, 2, false);
  Trace b = a;
  b.records.resize(1);
  EXPECT_EQ(trace_columns(a), trace_columns(b));
}

TEST(WriteTraceCsv, PrecisionAndRowCount) {
  const Trace t = tiny_trace(VehicleKind::kUnicycle, 2, false);
  std::ostringstream out;
  write_trace_csv(t, out);
  const std::string csv = out.str();
  EXPECT_NE(csv.find("0.333333333333333"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  // Every row has as many fields as the header.
  std::istringstream in(csv);
  std::string line;
  const auto cols = trace_columns(t).size();
  while (std::getline(in, line)) {
    EXPECT_EQ(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1, cols);
  }
}

TEST(Summarize, SettlingAndOvershoot) {
  const TraceSummary s = summarize(tiny_trace(VehicleKind::kUnicycle, 2, false), 100.0);
  EXPECT_NEAR(s.final_phi_norm, 0.04, 1e-15);
  EXPECT_FALSE(s.settling_time.has_value());
  EXPECT_EQ(s.max_overshoot, 0.0);
  ASSERT_TRUE(s.steady_state_radial_error.has_value());
  EXPECT_NEAR(*s.steady_state_radial_error, radial_error(0.04, 100.0), 1e-12);

  Trace t = tiny_trace(VehicleKind::kUnicycle, 2, false);
  t.records[3].phi(0) = -0.005;
  t.records[4].phi(0) = 0.002;
  const TraceSummary settled = summarize(t);
  ASSERT_TRUE(settled.settling_time.has_value());
  EXPECT_EQ(*settled.settling_time, 1.5);
  EXPECT_EQ(settled.max_overshoot, 0.005);
  EXPECT_FALSE(settled.steady_state_radial_error.has_value());
}

TEST(WriteSummary, ReportsNotSettled) {
  std::ostringstream out;
  write_summary(summarize(tiny_trace(VehicleKind::kUnicycle, 2, false)), out);
  EXPECT_NE(out.str().find("settling_time = not_settled"), std::string::npos);
}

}  // namespace
}  // namespace gvf
