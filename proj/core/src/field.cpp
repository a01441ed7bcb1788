#include "gvf/field.hpp"

#include "gvf/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace gvf {

namespace {

void require_full_rank(const LevelSetEval& eval, const char* what) {
  const RankReport rank = check_rank(eval.jacobian);
  if (!rank.full_rank) {
    std::ostringstream msg;
    msg << what << ": level-set Jacobian is rank deficient (sigma_min = " << rank.sigma_min
        << ")";
    throw SingularityError(msg.str(), rank.sigma_min);
  }
}

void check_direction(int direction) {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("direction must be +1 or -1");
  }
}

// Kernel vector of a wide (m-1) x m matrix by signed cofactor expansion.
Eigen::VectorXd cofactor_kernel(const Eigen::MatrixXd& j) {
  const Eigen::Index m = j.cols();
  Eigen::VectorXd v(m);
  Eigen::MatrixXd minor(m - 1, m - 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0, k = 0; c < m; ++c) {
      if (c != i) minor.col(k++) = j.col(c);
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    v(i) = sign * minor.determinant();
  }
  return v;
}

Eigen::VectorXd solve_gram(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& rhs) {
  const Eigen::MatrixXd gram = jacobian * jacobian.transpose();
  if (gram.rows() == 1) {
    return jacobian.transpose() * (rhs(0) / gram(0, 0));
  }
  return jacobian.transpose() * gram.ldlt().solve(rhs);
}

}  // namespace

BehaviorSignal::BehaviorSignal(Evaluator evaluator) : evaluator_(std::move(evaluator)) {
  if (!evaluator_) {
    throw std::invalid_argument("behavior evaluator is empty");
  }
}

BehaviorSignal BehaviorSignal::sinusoid(double amplitude, double omega, double phase,
                                        int components) {
  if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase)) {
    throw std::invalid_argument("sinusoid parameters must be finite");
  }
  if (components < 1) {
    throw std::invalid_argument("sinusoid needs at least one component");
  }
  return BehaviorSignal([=](double t) {
    const double arg = omega * t + phase;
    const double s = std::sin(arg);
    const double c = std::cos(arg);
    BehaviorSample out;
    out.gamma = Eigen::VectorXd::Constant(components, amplitude * s);
    out.gamma_dot = Eigen::VectorXd::Constant(components, amplitude * omega * c);
    out.gamma_ddot = Eigen::VectorXd::Constant(components, -amplitude * omega * omega * s);
    return out;
  });
}

void ErrorLaw::validate() const {
  if (!(k_phi > 0.0) || !std::isfinite(k_phi)) {
    throw std::invalid_argument("k_phi must be a positive finite gain");
  }
  if (k_b && (!(*k_b > 0.0) || !std::isfinite(*k_b))) {
    throw std::invalid_argument("k_B must be a positive finite gain");
  }
}

double ErrorLaw::error_gain() const {
  if (behavior && k_b) return *k_b;
  return k_phi;
}

FieldSample classic_gvf(const PathGeometry& path, const Eigen::VectorXd& p, int direction) {
  check_direction(direction);
  const LevelSetEval eval = path.evaluate(p);
  const RankReport rank = check_rank(eval.jacobian);

  FieldSample s;
  s.sigma_min = rank.sigma_min;
  s.singular = !rank.full_rank;
  if (path.dimension() == 2) {
    s.v_t = direction * rotation_e() * eval.jacobian.row(0).transpose();
  } else if (rank.full_rank) {
    s.v_t = direction * cofactor_kernel(eval.jacobian);
  } else {
    s.v_t = Eigen::VectorXd::Zero(path.dimension());
  }
  s.v_c = -eval.jacobian.transpose() * eval.phi;
  s.v_b = Eigen::VectorXd::Zero(path.dimension());
  s.f = s.v_t + s.v_c;
  s.u_phi = eval.jacobian * s.f;
  return s;
}

Eigen::VectorXd tangent_field(const LevelSetEval& eval, int direction) {
  check_direction(direction);
  require_full_rank(eval, "tangent undefined");
  if (eval.jacobian.cols() == 2) {
    return direction * rotation_e() * eval.jacobian.row(0).transpose();
  }
  return direction * cofactor_kernel(eval.jacobian);
}

Eigen::VectorXd tangent_field(const PathGeometry& path, const Eigen::VectorXd& p,
                              int direction) {
  return tangent_field(path.evaluate(p), direction);
}

Eigen::VectorXd ik_converging_field(const LevelSetEval& eval, const Eigen::VectorXd& u_phi) {
  if (u_phi.size() != eval.phi.size()) {
    throw std::invalid_argument("u_phi must have one entry per level function");
  }
  require_full_rank(eval, "singular path");
  return solve_gram(eval.jacobian, u_phi);
}

Eigen::VectorXd ik_converging_field(const PathGeometry& path, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& u_phi) {
  return ik_converging_field(path.evaluate(p), u_phi);
}

Eigen::VectorXd designed_error_rate(const Eigen::VectorXd& phi, double t, const ErrorLaw& law) {
  if (!law.behavior) {
    return -law.k_phi * phi;
  }
  const BehaviorSample b = (*law.behavior)(t);
  if (b.gamma.size() != phi.size() || b.gamma_dot.size() != phi.size()) {
    throw std::invalid_argument("behavior signal dimension does not match the path");
  }
  return b.gamma_dot - law.error_gain() * (phi - b.gamma);
}

ConvergingField behavior_converging_field(const LevelSetEval& eval, double t,
                                          const ErrorLaw& law) {
  require_full_rank(eval, "singular path");
  const double k = law.error_gain();
  ConvergingField out;
  out.v_c = solve_gram(eval.jacobian, -k * eval.phi);
  if (law.behavior) {
    const BehaviorSample b = (*law.behavior)(t);
    if (b.gamma.size() != eval.phi.size() || b.gamma_dot.size() != eval.phi.size()) {
      throw std::invalid_argument("behavior signal dimension does not match the path");
    }
    out.v_b = solve_gram(eval.jacobian, b.gamma_dot + k * b.gamma);
  } else {
    out.v_b = Eigen::VectorXd::Zero(eval.jacobian.cols());
  }
  out.u_phi_effective = designed_error_rate(eval.phi, t, law);
  return out;
}

ConvergingField behavior_converging_field(const PathGeometry& path, const Eigen::VectorXd& p,
                                          double t, const ErrorLaw& law) {
  return behavior_converging_field(path.evaluate(p), t, law);
}

FieldSample assemble_ik_gvf(const PathGeometry& path, const Eigen::VectorXd& p, double t,
                            const ErrorLaw& law, int direction) {
  const LevelSetEval eval = path.evaluate(p);
  const ConvergingField conv = behavior_converging_field(eval, t, law);

  FieldSample s;
  s.v_t = tangent_field(eval, direction);
  s.v_c = conv.v_c;
  s.v_b = conv.v_b;
  s.u_phi = conv.u_phi_effective;
  s.f = s.v_t + s.v_c + s.v_b;
  s.sigma_min = check_rank(eval.jacobian).sigma_min;
  return s;
}

Eigen::VectorXd project_onto_tangent(const PathGeometry& path, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& x) {
  if (x.size() != path.dimension()) {
    throw std::invalid_argument("vector dimension does not match the path");
  }
  const LevelSetEval eval = path.evaluate(p);
  require_full_rank(eval, "projection undefined");
  return x - solve_gram(eval.jacobian, eval.jacobian * x);
}

}  // namespace gvf
