#include "gvf/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace gvf {

namespace {

void append_indexed(std::vector<std::string>& cols, const std::string& stem, Eigen::Index n) {
  for (Eigen::Index i = 1; i <= n; ++i) cols.push_back(stem + "_" + std::to_string(i));
}

// First index of the steady-state window (last quarter of the run).
std::size_t tail_start(const Trace& trace) {
  const double t_end = trace.records.back().t;
  const double t_from = 0.75 * t_end;
  std::size_t i = 0;
  while (i + 1 < trace.records.size() && trace.records[i].t < t_from) ++i;
  return i;
}

}  // namespace

std::vector<std::string> trace_columns(const Trace& trace) {
  const bool unicycle = trace.kind == VehicleKind::kUnicycle;
  const Eigen::Index k = trace.dimension - 1;
  std::vector<std::string> cols = {"t", "px", "py"};
  if (trace.dimension == 3) cols.push_back("pz");
  if (unicycle) cols.push_back("theta");
  append_indexed(cols, "phi", k);
  append_indexed(cols, "phi_pred", k);
  if (trace.has_behavior) append_indexed(cols, "gamma", k);
  append_indexed(cols, "u_phi", k);
  cols.insert(cols.end(), {"vt_norm", "vc_norm"});
  if (unicycle) {
    cols.insert(cols.end(), {"alpha", "saturated", "omega", "theta_dot_c", "lyapunov_v"});
  }
  cols.push_back("ground_speed");
  return cols;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  const auto cols = trace_columns(trace);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out.imbue(std::locale::classic());
  out << std::setprecision(15);

  const bool unicycle = trace.kind == VehicleKind::kUnicycle;
  for (const auto& r : trace.records) {
    out << r.t;
    for (Eigen::Index i = 0; i < r.position.size(); ++i) out << ',' << r.position(i);
    if (unicycle) out << ',' << r.heading;
    auto put = [&](const Eigen::VectorXd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << v(i);
    };
    put(r.phi);
    put(r.phi_predicted);
    if (trace.has_behavior) put(r.gamma);
    put(r.u_phi);
    out << ',' << r.vt_norm << ',' << r.vc_norm;
    if (unicycle) {
      out << ',' << r.alpha << ',' << (r.saturated ? 1 : 0) << ',' << r.omega << ','
          << r.theta_dot_c << ',' << r.lyapunov_v;
    }
    out << ',' << r.ground_speed << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

TraceSummary summarize(const Trace& trace, std::optional<double> radius) {
  TraceSummary s;
  if (trace.records.empty()) return s;
  const auto& recs = trace.records;

  s.final_phi_norm = recs.back().phi.norm();
  s.final_lyapunov = recs.back().lyapunov_v;

  // Overshoot: largest excursion of each component past zero on the side
  // opposite to its initial sign.
  const Eigen::VectorXd& phi0 = recs.front().phi;
  for (Eigen::Index i = 0; i < phi0.size(); ++i) {
    if (phi0(i) == 0.0) continue;
    const double sign = phi0(i) > 0.0 ? 1.0 : -1.0;
    for (const auto& r : recs) s.max_overshoot = std::max(s.max_overshoot, -sign * r.phi(i));
  }

  // Settling: earliest time after which |phi| stays below the threshold.
  std::optional<double> settle;
  for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
    if (it->phi.norm() >= kSettlingThreshold) break;
    settle = it->t;
  }
  s.settling_time = settle;

  s.min_ground_speed = std::numeric_limits<double>::infinity();
  s.max_ground_speed = 0.0;
  for (const auto& r : recs) {
    s.min_ground_speed = std::min(s.min_ground_speed, r.ground_speed);
    s.max_ground_speed = std::max(s.max_ground_speed, r.ground_speed);
    s.any_saturated = s.any_saturated || r.saturated;
  }

  double radial = 0.0;
  for (std::size_t i = tail_start(trace); i < recs.size(); ++i) {
    const auto& r = recs[i];
    const Eigen::VectorXd gamma =
        r.gamma.size() == r.phi.size() ? r.gamma : Eigen::VectorXd::Zero(r.phi.size());
    s.steady_state_error = std::max(s.steady_state_error, (r.phi - gamma).norm());
    s.max_abs_phi_steady = std::max(s.max_abs_phi_steady, r.phi.norm());
    if (radius) {
      const double actual = *radius * std::sqrt(std::max(0.0, r.phi(0) + 1.0));
      const double desired = *radius * std::sqrt(std::max(0.0, gamma(0) + 1.0));
      radial = std::max(radial, std::abs(actual - desired));
    }
  }
  if (radius) s.steady_state_radial_error = radial;
  return s;
}

void write_summary(const TraceSummary& s, std::ostream& out) {
  const auto old_precision = out.precision();
  out << std::setprecision(10);
  out << "final_phi_norm = " << s.final_phi_norm << '\n';
  out << "max_overshoot = " << s.max_overshoot << '\n';
  out << "settling_threshold = " << kSettlingThreshold << '\n';
  if (s.settling_time) {
    out << "settling_time = " << *s.settling_time << '\n';
  } else {
    out << "settling_time = not_settled\n";
  }
  out << "steady_state_error = " << s.steady_state_error << '\n';
  if (s.steady_state_radial_error) {
    out << "steady_state_radial_error_m = " << *s.steady_state_radial_error << '\n';
  }
  out << "max_abs_phi_steady = " << s.max_abs_phi_steady << '\n';
  out << "final_lyapunov_v = " << s.final_lyapunov << '\n';
  out << "ground_speed_min = " << s.min_ground_speed << '\n';
  out << "ground_speed_max = " << s.max_ground_speed << '\n';
  out << "saturated_at_any_step = " << (s.any_saturated ? "yes" : "no") << '\n';
  out.precision(old_precision);
}

}  // namespace gvf
