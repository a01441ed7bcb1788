#pragma once

#include "gvf/field.hpp"
#include "gvf/path_geometry.hpp"

#include <Eigen/Dense>

#include <optional>

namespace gvf {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Planar pose of a constant-speed unicycle.
struct UnicycleState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double heading = 0.0;  // rad, wrapped to (-pi, pi]

  /// v * R(heading) * [1 0]^T
  Eigen::Vector2d velocity(double speed) const;
};

struct GuidanceGains {
  double k_phi = 0.25;
  double k_theta = 0.6;
  std::optional<double> k_b;  // behavior gain; falls back to k_phi when unset
  double speed = 15.0;        // m/s
  int direction = 1;          // +1 counter-clockwise on the circle

  /// Throws std::invalid_argument on non-positive gains, speed or bad direction.
  void validate() const;

  ErrorLaw error_law(const BehaviorSignal* behavior) const;
};

struct UnicycleFieldSample {
  Eigen::Vector2d f = Eigen::Vector2d::Zero();
  Eigen::Vector2d vartheta = Eigen::Vector2d::Zero();  // v_C + v_B
  Eigen::Vector2d v_t = Eigen::Vector2d::Zero();       // unnormalized tangent
  Eigen::Vector2d v_c = Eigen::Vector2d::Zero();
  double phi = 0.0;
  double u_phi = 0.0;          // designed error rate
  std::optional<double> alpha; // absent on the saturated branch
  bool saturated = false;
  double speed = 0.0;          // v used to build the field
  Eigen::Vector2d f_dot = Eigen::Vector2d::Zero();
  double theta_dot_c = 0.0;
  double omega = 0.0;
};

/// Speed-preserving field: v * vartheta / |vartheta| when |vartheta| > v,
/// otherwise alpha * v_T/|v_T| + vartheta with alpha = sqrt(v^2 - |vartheta|^2).
/// Uses gains.speed as v. Throws SingularityError on rank deficiency.
UnicycleFieldSample unicycle_field(const PathGeometry& path, const Eigen::Vector2d& p, double t,
                                   const GuidanceGains& gains,
                                   const BehaviorSignal* behavior = nullptr);

/// Analytic time derivative of unicycle_field along the motion p_dot.
/// Two-dimensional paths only. Assumes the field speed is constant.
Eigen::Vector2d field_time_derivative(const PathGeometry& path, const Eigen::Vector2d& p,
                                      const Eigen::Vector2d& p_dot, double t,
                                      const GuidanceGains& gains,
                                      const BehaviorSignal* behavior = nullptr);

Eigen::Vector2d field_time_derivative(const PathGeometry& path, const UnicycleState& state,
                                      double t, const GuidanceGains& gains,
                                      const BehaviorSignal* behavior = nullptr);

struct HeadingCommand {
  double omega = 0.0;
  double theta_dot_c = 0.0;
};

/// omega = theta_dot_c + k_theta * f^T E p_dot / v^2,
/// theta_dot_c = f^T E^T f_dot / v^2, with v = |f|.
HeadingCommand heading_controller(const Eigen::Vector2d& p_dot, const Eigen::Vector2d& f,
                                  const Eigen::Vector2d& f_dot, double k_theta);

struct AlignmentError {
  Eigen::Vector2d varphi = Eigen::Vector2d::Zero();  // p_dot - f
  double lyapunov = 0.0;                              // 0.5 |varphi|^2
};

AlignmentError alignment_error(const Eigen::Vector2d& p_dot, const Eigen::Vector2d& f);

/// Full guidance step at one instant: field, derivative and heading rate.
/// The field speed is |p_dot| (ground speed).
UnicycleFieldSample guide_unicycle(const PathGeometry& path, const Eigen::Vector2d& p,
                                   const Eigen::Vector2d& p_dot, double t,
                                   const GuidanceGains& gains,
                                   const BehaviorSignal* behavior = nullptr);

}  // namespace gvf
