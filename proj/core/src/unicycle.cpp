#include "gvf/unicycle.hpp"

#include "gvf/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gvf {

namespace {

void require_planar(const PathGeometry& path) {
  if (path.dimension() != 2) {
    throw std::invalid_argument("unicycle guidance requires a planar (m = 2) path");
  }
}

// Converging part, tangent and designed rate at p. Shared by the field and
// its derivative so both use identical branch data.
struct PlanarTerms {
  LevelSetEval eval;
  Eigen::Vector2d grad;
  Eigen::Vector2d v_t;
  Eigen::Vector2d v_c;
  Eigen::Vector2d vartheta;
  double u_phi = 0.0;
};

PlanarTerms planar_terms(const PathGeometry& path, const Eigen::Vector2d& p, double t,
                         const ErrorLaw& law, int direction) {
  PlanarTerms out;
  out.eval = path.evaluate(p);
  const ConvergingField conv = behavior_converging_field(out.eval, t, law);
  out.grad = out.eval.jacobian.row(0).transpose();
  out.v_t = tangent_field(out.eval, direction);
  out.v_c = conv.v_c;
  out.vartheta = conv.total();
  out.u_phi = conv.u_phi_effective(0);
  return out;
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

Eigen::Vector2d UnicycleState::velocity(double speed) const {
  return speed * Eigen::Vector2d(std::cos(heading), std::sin(heading));
}

void GuidanceGains::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(k_phi)) throw std::invalid_argument("k_phi must be positive");
  if (!positive(k_theta)) throw std::invalid_argument("k_theta must be positive");
  if (k_b && !positive(*k_b)) throw std::invalid_argument("k_B must be positive");
  if (!positive(speed)) throw std::invalid_argument("speed must be positive");
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("direction must be +1 or -1");
  }
}

ErrorLaw GuidanceGains::error_law(const BehaviorSignal* behavior) const {
  ErrorLaw law;
  law.k_phi = k_phi;
  law.k_b = k_b;
  if (behavior) law.behavior = *behavior;
  return law;
}

UnicycleFieldSample unicycle_field(const PathGeometry& path, const Eigen::Vector2d& p, double t,
                                   const GuidanceGains& gains, const BehaviorSignal* behavior) {
  require_planar(path);
  const PlanarTerms terms =
      planar_terms(path, p, t, gains.error_law(behavior), gains.direction);

  UnicycleFieldSample s;
  s.speed = gains.speed;
  s.phi = terms.eval.phi(0);
  s.u_phi = terms.u_phi;
  s.v_t = terms.v_t;
  s.v_c = terms.v_c;
  s.vartheta = terms.vartheta;

  const double v = gains.speed;
  const double norm_vartheta = terms.vartheta.norm();
  if (norm_vartheta > v) {
    s.saturated = true;
    s.f = v * terms.vartheta / norm_vartheta;
  } else {
    const double alpha = std::sqrt(std::max(0.0, v * v - norm_vartheta * norm_vartheta));
    s.alpha = alpha;
    s.f = alpha * terms.v_t.normalized() + terms.vartheta;
  }
  return s;
}

Eigen::Vector2d field_time_derivative(const PathGeometry& path, const Eigen::Vector2d& p,
                                      const Eigen::Vector2d& p_dot, double t,
                                      const GuidanceGains& gains,
                                      const BehaviorSignal* behavior) {
  require_planar(path);
  const ErrorLaw law = gains.error_law(behavior);
  const PlanarTerms terms = planar_terms(path, p, t, law, gains.direction);

  const Eigen::Vector2d& g = terms.grad;
  const Eigen::Matrix2d h = terms.eval.hessians.at(0);
  const double gram = g.squaredNorm();
  const Eigen::Vector2d h_pdot = h * p_dot;

  // beta = g / (g^T g); d/dt along p_dot.
  const Eigen::Vector2d beta = g / gram;
  const Eigen::Vector2d beta_dot = h_pdot / gram - g * (2.0 * g.dot(h_pdot) / (gram * gram));

  // Designed rate u = gamma_dot - k (phi - gamma) and its derivative.
  const double k = law.error_gain();
  const double phi_dot = g.dot(p_dot);
  double u_dot = -k * phi_dot;
  if (law.behavior) {
    const BehaviorSample b = (*law.behavior)(t);
    u_dot = b.gamma_ddot(0) - k * (phi_dot - b.gamma_dot(0));
  }
  const Eigen::Vector2d vartheta_dot = beta_dot * terms.u_phi + beta * u_dot;

  const Eigen::Vector2d& vartheta = terms.vartheta;
  const double v = gains.speed;
  const double nv = vartheta.norm();
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();

  if (nv > v) {
    return v * (eye / nv - vartheta * vartheta.transpose() / (nv * nv * nv)) * vartheta_dot;
  }

  const double alpha = std::sqrt(std::max(0.0, v * v - nv * nv));
  const Eigen::Vector2d& v_t = terms.v_t;
  const double nt = v_t.norm();
  const Eigen::Vector2d v_t_dot = gains.direction * rotation_e() * h_pdot;
  // alpha -> 0 is the branch boundary where alpha_dot is unbounded; fall back
  // to the saturated-branch expression, which is the one-sided limit.
  if (alpha <= 1e-12 * v) {
    return v * (eye / nv - vartheta * vartheta.transpose() / (nv * nv * nv)) * vartheta_dot;
  }
  const double alpha_dot = -vartheta.dot(vartheta_dot) / alpha;
  return alpha_dot * v_t / nt +
         alpha * (eye / nt - v_t * v_t.transpose() / (nt * nt * nt)) * v_t_dot + vartheta_dot;
}

Eigen::Vector2d field_time_derivative(const PathGeometry& path, const UnicycleState& state,
                                      double t, const GuidanceGains& gains,
                                      const BehaviorSignal* behavior) {
  return field_time_derivative(path, state.position, state.velocity(gains.speed), t, gains,
                               behavior);
}

HeadingCommand heading_controller(const Eigen::Vector2d& p_dot, const Eigen::Vector2d& f,
                                  const Eigen::Vector2d& f_dot, double k_theta) {
  const Eigen::Matrix2d e = rotation_e();
  const double v2 = f.squaredNorm();
  HeadingCommand cmd;
  if (!(v2 > 0.0)) return cmd;
  cmd.theta_dot_c = f.dot(e.transpose() * f_dot) / v2;
  cmd.omega = cmd.theta_dot_c + k_theta * f.dot(e * p_dot) / v2;
  return cmd;
}

AlignmentError alignment_error(const Eigen::Vector2d& p_dot, const Eigen::Vector2d& f) {
  AlignmentError out;
  out.varphi = p_dot - f;
  out.lyapunov = 0.5 * out.varphi.squaredNorm();
  return out;
}

UnicycleFieldSample guide_unicycle(const PathGeometry& path, const Eigen::Vector2d& p,
                                   const Eigen::Vector2d& p_dot, double t,
                                   const GuidanceGains& gains, const BehaviorSignal* behavior) {
  GuidanceGains g = gains;
  g.speed = p_dot.norm();
  if (!(g.speed > 0.0)) {
    throw std::invalid_argument("ground speed must be positive for unicycle guidance");
  }
  UnicycleFieldSample s = unicycle_field(path, p, t, g, behavior);
  s.f_dot = field_time_derivative(path, p, p_dot, t, g, behavior);
  const HeadingCommand cmd = heading_controller(p_dot, s.f, s.f_dot, gains.k_theta);
  s.theta_dot_c = cmd.theta_dot_c;
  s.omega = cmd.omega;
  return s;
}

}  // namespace gvf
