#pragma once

#include "gvf/errors.hpp"
#include "gvf/field.hpp"
#include "gvf/path_geometry.hpp"
#include "gvf/unicycle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvf {

/// One classical fourth-order Runge-Kutta step of x' = rate(x, t).
/// Throws IntegrationError if any stage derivative is non-finite.
template <typename Rate>
Eigen::VectorXd rk4_step(Rate&& rate, const Eigen::VectorXd& x, double t, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rk4_step: dt must be positive");
  }
  auto stage = [&](const Eigen::VectorXd& xs, double ts, const char* name) {
    Eigen::VectorXd k = rate(xs, ts);
    if (k.size() != x.size() || !k.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite derivative at stage " << name << ", t = " << ts << ", state = ["
          << xs.transpose() << "]";
      throw IntegrationError(msg.str());
    }
    return k;
  };
  const double half = 0.5 * dt;
  const Eigen::VectorXd k1 = stage(x, t, "k1");
  const Eigen::VectorXd k2 = stage(x + half * k1, t + half, "k2");
  const Eigen::VectorXd k3 = stage(x + half * k2, t + half, "k3");
  const Eigen::VectorXd k4 = stage(x + dt * k3, t + dt, "k4");
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

enum class VehicleKind { kSingleIntegrator, kUnicycle };

/// Additive ground-frame drift on p_dot.
struct WindModel {
  enum class Mode { kNone, kConstant, kGust };

  Mode mode = Mode::kNone;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // m/s
  double amplitude = 0.0;                          // m/s, gust only
  double frequency = 0.0;                          // rad/s, gust only
  double phase = 0.0;                              // rad, gust only

  /// Gust: mean + amplitude * sin(frequency t + phase) along the mean
  /// direction (+x if the mean is zero).
  Eigen::Vector2d at(double t) const;
  void validate() const;
};

struct SimConfig {
  VehicleKind kind = VehicleKind::kUnicycle;
  PathGeometry path = make_circle(100.0);
  Eigen::VectorXd initial_position = Eigen::Vector2d(110.0, 0.0);
  double initial_heading = 0.0;  // unicycle only
  GuidanceGains gains;           // speed = airspeed for the unicycle
  std::optional<BehaviorSignal> behavior;
  WindModel wind;
  double dt = 0.01;
  double t_final = 60.0;
  double t_p = 0.0;  // prediction start

  void validate() const;
  ErrorLaw error_law() const;
};

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd position;
  double heading = 0.0;
  Eigen::VectorXd phi;
  Eigen::VectorXd phi_predicted;
  Eigen::VectorXd gamma;
  Eigen::VectorXd u_phi;
  double vt_norm = 0.0;
  double vc_norm = 0.0;  // |v_C + v_B|
  double alpha = 0.0;    // 0 on the saturated branch
  bool saturated = false;
  double omega = 0.0;
  double theta_dot_c = 0.0;
  double lyapunov_v = 0.0;
  double ground_speed = 0.0;
  double sigma_min = 0.0;
};

struct Trace {
  VehicleKind kind = VehicleKind::kUnicycle;
  int dimension = 2;
  bool has_behavior = false;
  std::vector<TraceRecord> records;
};

/// Typed failure of a simulation run.
class SimulationError : public std::runtime_error {
 public:
  enum class Kind { kSingularity, kNonFinite };

  SimulationError(Kind kind, double t, const std::string& what)
      : std::runtime_error(what), kind_(kind), t_(t) {}

  Kind kind() const noexcept { return kind_; }
  double time() const noexcept { return t_; }

 private:
  Kind kind_;
  double t_;
};

/// p' = f(p, t) with the inverse-kinematics field. Throws SimulationError.
Trace simulate_single_integrator(const SimConfig& config);

/// p' = v R(theta) e1 + w(t), theta' = omega. The field speed is the ground
/// speed |p'|. Throws SimulationError.
Trace simulate_unicycle(const SimConfig& config);

/// Dispatches on config.kind.
Trace simulate(const SimConfig& config);

/// Reference error series starting at t_p. Without behavior:
/// phi_p = phi(t_p) exp(-k (t - t_p)). With behavior, RK4 integration of
/// phi_p' = gamma' - k (phi_p - gamma) from phi_p(t_p) = phi(t_p) + gamma(t_p).
/// Entries before t_p are zero.
std::vector<Eigen::VectorXd> predicted_phi(const std::vector<double>& times, double t_p,
                                           const Eigen::VectorXd& phi_at_tp, double gain,
                                           const BehaviorSignal* behavior = nullptr);

/// Fills record.phi_predicted in place using the first record at or after t_p.
void attach_prediction(Trace& trace, const SimConfig& config);

}  // namespace gvf
