#include "gvf/simulation.hpp"

#include <cmath>
#include <sstream>

namespace gvf {

namespace {

constexpr double kTimeEps = 1e-9;

std::size_t step_count(const SimConfig& c) {
  return static_cast<std::size_t>(std::llround(c.t_final / c.dt));
}

const BehaviorSignal* behavior_ptr(const SimConfig& c) {
  return c.behavior ? &*c.behavior : nullptr;
}

// Runs `body`, translating library exceptions into SimulationError at time t.
template <typename Body>
auto guarded(double t, Body&& body) {
  try {
    return body();
  } catch (const SingularityError& e) {
    std::ostringstream msg;
    msg << "singularity encountered at t = " << t << ": " << e.what();
    throw SimulationError(SimulationError::Kind::kSingularity, t, msg.str());
  } catch (const IntegrationError& e) {
    std::ostringstream msg;
    msg << "integration failed at t = " << t << ": " << e.what();
    throw SimulationError(SimulationError::Kind::kNonFinite, t, msg.str());
  }
}

void require_finite_state(const Eigen::VectorXd& x, double t) {
  if (!x.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state at t = " << t << ": [" << x.transpose() << "]";
    throw SimulationError(SimulationError::Kind::kNonFinite, t, msg.str());
  }
}

Eigen::VectorXd gamma_at(const SimConfig& c, double t, Eigen::Index size) {
  if (!c.behavior) return Eigen::VectorXd::Zero(size);
  return (*c.behavior)(t).gamma;
}

}  // namespace

Eigen::Vector2d WindModel::at(double t) const {
  switch (mode) {
    case Mode::kNone:
      return Eigen::Vector2d::Zero();
    case Mode::kConstant:
      return mean;
    case Mode::kGust: {
      const double n = mean.norm();
      const Eigen::Vector2d dir = n > 0.0 ? Eigen::Vector2d(mean / n) : Eigen::Vector2d::UnitX();
      return mean + amplitude * std::sin(frequency * t + phase) * dir;
    }
  }
  return Eigen::Vector2d::Zero();
}

void WindModel::validate() const {
  if (!mean.allFinite()) throw std::invalid_argument("wind mean must be finite");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("wind amplitude must be non-negative");
  }
  if (!(frequency >= 0.0) || !std::isfinite(frequency)) {
    throw std::invalid_argument("wind frequency must be non-negative");
  }
  if (!std::isfinite(phase)) throw std::invalid_argument("wind phase must be finite");
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_final >= dt) || !std::isfinite(t_final)) {
    throw std::invalid_argument("t_final must be at least dt");
  }
  if (!(t_p >= 0.0) || t_p > t_final) {
    throw std::invalid_argument("t_p must lie within [0, t_final]");
  }
  if (initial_position.size() != path.dimension()) {
    throw std::invalid_argument("initial position dimension does not match the path");
  }
  if (!initial_position.allFinite() || !std::isfinite(initial_heading)) {
    throw std::invalid_argument("initial state must be finite");
  }
  if (kind == VehicleKind::kUnicycle && path.dimension() != 2) {
    throw std::invalid_argument("unicycle vehicles require a planar path");
  }
  if (kind == VehicleKind::kSingleIntegrator && wind.mode != WindModel::Mode::kNone) {
    throw std::invalid_argument("wind is only modeled for the unicycle");
  }
  gains.validate();
  error_law().validate();
  wind.validate();
}

ErrorLaw SimConfig::error_law() const { return gains.error_law(behavior_ptr(*this)); }

Trace simulate_single_integrator(const SimConfig& config) {
  config.validate();
  const ErrorLaw law = config.error_law();
  const int direction = config.gains.direction;
  const PathGeometry& path = config.path;

  auto rate = [&](const Eigen::VectorXd& p, double t) {
    return assemble_ik_gvf(path, p, t, law, direction).f;
  };

  Trace trace;
  trace.kind = VehicleKind::kSingleIntegrator;
  trace.dimension = path.dimension();
  trace.has_behavior = config.behavior.has_value();

  const std::size_t n = step_count(config);
  trace.records.reserve(n + 1);
  Eigen::VectorXd p = config.initial_position;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    require_finite_state(p, t);
    const FieldSample s = guarded(t, [&] { return assemble_ik_gvf(path, p, t, law, direction); });
    const LevelSetEval eval = path.evaluate(p);

    TraceRecord r;
    r.t = t;
    r.position = p;
    r.phi = eval.phi;
    r.gamma = gamma_at(config, t, eval.phi.size());
    r.u_phi = s.u_phi;
    r.vt_norm = s.v_t.norm();
    r.vc_norm = s.converging().norm();
    r.ground_speed = s.f.norm();
    r.sigma_min = s.sigma_min;
    trace.records.push_back(std::move(r));

    if (k < n) {
      p = guarded(t, [&] { return rk4_step(rate, p, t, config.dt); });
    }
  }
  attach_prediction(trace, config);
  return trace;
}

Trace simulate_unicycle(const SimConfig& config) {
  config.validate();
  const PathGeometry& path = config.path;
  const GuidanceGains& gains = config.gains;
  const BehaviorSignal* behavior = behavior_ptr(config);
  const double airspeed = gains.speed;

  auto ground_velocity = [&](double heading, double t) -> Eigen::Vector2d {
    return airspeed * Eigen::Vector2d(std::cos(heading), std::sin(heading)) + config.wind.at(t);
  };

  auto rate = [&](const Eigen::VectorXd& x, double t) {
    const Eigen::Vector2d p = x.head<2>();
    const Eigen::Vector2d p_dot = ground_velocity(x(2), t);
    const UnicycleFieldSample s = guide_unicycle(path, p, p_dot, t, gains, behavior);
    Eigen::VectorXd dx(3);
    dx << p_dot, s.omega;
    return dx;
  };

  Trace trace;
  trace.kind = VehicleKind::kUnicycle;
  trace.dimension = 2;
  trace.has_behavior = behavior != nullptr;

  const std::size_t n = step_count(config);
  trace.records.reserve(n + 1);
  Eigen::VectorXd x(3);
  x << config.initial_position, wrap_angle(config.initial_heading);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    require_finite_state(x, t);
    const Eigen::Vector2d p = x.head<2>();
    const Eigen::Vector2d p_dot = ground_velocity(x(2), t);
    const UnicycleFieldSample s =
        guarded(t, [&] { return guide_unicycle(path, p, p_dot, t, gains, behavior); });

    TraceRecord r;
    r.t = t;
    r.position = p;
    r.heading = x(2);
    r.phi = Eigen::VectorXd::Constant(1, s.phi);
    r.gamma = gamma_at(config, t, 1);
    r.u_phi = Eigen::VectorXd::Constant(1, s.u_phi);
    r.vt_norm = s.v_t.norm();
    r.vc_norm = s.vartheta.norm();
    r.alpha = s.alpha.value_or(0.0);
    r.saturated = s.saturated;
    r.omega = s.omega;
    r.theta_dot_c = s.theta_dot_c;
    r.lyapunov_v = alignment_error(p_dot, s.f).lyapunov;
    r.ground_speed = p_dot.norm();
    r.sigma_min = check_rank(path.evaluate(p).jacobian).sigma_min;
    trace.records.push_back(std::move(r));

    if (k < n) {
      x = guarded(t, [&] { return rk4_step(rate, x, t, config.dt); });
      x(2) = wrap_angle(x(2));
    }
  }
  attach_prediction(trace, config);
  return trace;
}

Trace simulate(const SimConfig& config) {
  return config.kind == VehicleKind::kUnicycle ? simulate_unicycle(config)
                                               : simulate_single_integrator(config);
}

std::vector<Eigen::VectorXd> predicted_phi(const std::vector<double>& times, double t_p,
                                           const Eigen::VectorXd& phi_at_tp, double gain,
                                           const BehaviorSignal* behavior) {
  std::vector<Eigen::VectorXd> out(times.size(), Eigen::VectorXd::Zero(phi_at_tp.size()));
  std::size_t start = 0;
  while (start < times.size() && times[start] < t_p - kTimeEps) ++start;
  if (start == times.size()) return out;

  const double t0 = times[start];
  if (!behavior) {
    for (std::size_t i = start; i < times.size(); ++i) {
      out[i] = phi_at_tp * std::exp(-gain * (times[i] - t0));
    }
    return out;
  }

  auto rate = [&](const Eigen::VectorXd& phi_p, double t) -> Eigen::VectorXd {
    const BehaviorSample b = (*behavior)(t);
    return b.gamma_dot - gain * (phi_p - b.gamma);
  };
  Eigen::VectorXd phi_p = phi_at_tp + (*behavior)(t0).gamma;
  out[start] = phi_p;
  for (std::size_t i = start + 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    if (h > 0.0) phi_p = rk4_step(rate, phi_p, times[i - 1], h);
    out[i] = phi_p;
  }
  return out;
}

void attach_prediction(Trace& trace, const SimConfig& config) {
  if (trace.records.empty()) return;
  std::vector<double> times;
  times.reserve(trace.records.size());
  for (const auto& r : trace.records) times.push_back(r.t);

  std::size_t start = 0;
  while (start < times.size() && times[start] < config.t_p - kTimeEps) ++start;
  const Eigen::Index dim = trace.records.front().phi.size();
  if (start == times.size()) {
    for (auto& r : trace.records) r.phi_predicted = Eigen::VectorXd::Zero(dim);
    return;
  }
  const auto series = predicted_phi(times, config.t_p, trace.records[start].phi,
                                    config.error_law().error_gain(), behavior_ptr(config));
  for (std::size_t i = 0; i < series.size(); ++i) trace.records[i].phi_predicted = series[i];
}

}  // namespace gvf
