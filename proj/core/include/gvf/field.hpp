#pragma once

#include "gvf/path_geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace gvf {

/// gamma(t) and its first two derivatives, each in R^{m-1}.
struct BehaviorSample {
  Eigen::VectorXd gamma;
  Eigen::VectorXd gamma_dot;
  Eigen::VectorXd gamma_ddot;
};

/// Time-varying level-set reference. Derivatives are supplied analytically.
class BehaviorSignal {
 public:
  using Evaluator = std::function<BehaviorSample(double)>;

  explicit BehaviorSignal(Evaluator evaluator);

  /// gamma_i(t) = amplitude * sin(omega * t + phase) for every component.
  static BehaviorSignal sinusoid(double amplitude, double omega, double phase = 0.0,
                                 int components = 1);

  BehaviorSample operator()(double t) const { return evaluator_(t); }

 private:
  Evaluator evaluator_;
};

/// Designed error dynamics. Without a behavior signal u_phi = -k_phi * phi;
/// with one, J (v_C + v_B) = gamma_dot - k_B (phi - gamma).
struct ErrorLaw {
  double k_phi = 1.0;
  std::optional<double> k_b;
  std::optional<BehaviorSignal> behavior;

  /// Throws std::invalid_argument on non-positive gains.
  void validate() const;

  /// Gain multiplying the level-set error: k_B if a behavior signal is
  /// attached (falling back to k_phi), otherwise k_phi.
  double error_gain() const;
};

/// Field evaluation with its decomposition f = v_T + v_C + v_B.
struct FieldSample {
  Eigen::VectorXd f;
  Eigen::VectorXd v_t;
  Eigen::VectorXd v_c;
  Eigen::VectorXd v_b;
  Eigen::VectorXd u_phi;   // designed error rate actually imposed, J f = u_phi
  bool saturated = false;
  std::optional<double> alpha;
  bool singular = false;   // Jacobian rank-deficient at p (classic field only)
  double sigma_min = 0.0;

  Eigen::VectorXd converging() const { return v_c + v_b; }
};

/// Classic field f = v_T - J^T phi. Does not throw on rank deficiency; the
/// sample is flagged `singular` instead.
FieldSample classic_gvf(const PathGeometry& path, const Eigen::VectorXd& p, int direction = 1);

/// Nonzero kernel vector of J (unnormalized). m = 2: direction * E grad(phi);
/// m = 3: direction * (grad phi1 x grad phi2); general m: signed cofactor
/// expansion. Throws SingularityError when J is rank deficient.
Eigen::VectorXd tangent_field(const PathGeometry& path, const Eigen::VectorXd& p,
                              int direction = 1);
Eigen::VectorXd tangent_field(const LevelSetEval& eval, int direction = 1);

/// Least-squares preimage J^T (J J^T)^{-1} u_phi. Throws SingularityError
/// when J is rank deficient; there is no pseudo-inverse fallback.
Eigen::VectorXd ik_converging_field(const PathGeometry& path, const Eigen::VectorXd& p,
                                    const Eigen::VectorXd& u_phi);
Eigen::VectorXd ik_converging_field(const LevelSetEval& eval, const Eigen::VectorXd& u_phi);

struct ConvergingField {
  Eigen::VectorXd v_c;
  Eigen::VectorXd v_b;
  Eigen::VectorXd u_phi_effective;

  Eigen::VectorXd total() const { return v_c + v_b; }
};

/// Right-hand side of the designed error dynamics at (phi, t).
Eigen::VectorXd designed_error_rate(const Eigen::VectorXd& phi, double t, const ErrorLaw& law);

ConvergingField behavior_converging_field(const PathGeometry& path, const Eigen::VectorXd& p,
                                          double t, const ErrorLaw& law);
ConvergingField behavior_converging_field(const LevelSetEval& eval, double t,
                                          const ErrorLaw& law);

/// Inverse-kinematics field v_T + v_C + v_B.
FieldSample assemble_ik_gvf(const PathGeometry& path, const Eigen::VectorXd& p, double t,
                            const ErrorLaw& law, int direction = 1);

/// (I - J^T (J J^T)^{-1} J) x
Eigen::VectorXd project_onto_tangent(const PathGeometry& path, const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& x);

/// Rotation by +pi/2.
inline Eigen::Matrix2d rotation_e() {
  Eigen::Matrix2d e;
  e << 0.0, -1.0, 1.0, 0.0;
  return e;
}

}  // namespace gvf
