#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace gvf::testing {

inline double rel_err(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-12) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

/// Uniform point in the planar annulus rho in [r_min, r_max] about `center`.
inline Eigen::Vector2d annulus_point(std::mt19937_64& rng, double r_min, double r_max,
                                     const Eigen::Vector2d& center = Eigen::Vector2d::Zero()) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = std::sqrt(r_min * r_min + u(rng) * (r_max * r_max - r_min * r_min));
  const double ang = 2.0 * M_PI * u(rng);
  return center + rho * Eigen::Vector2d(std::cos(ang), std::sin(ang));
}

}  // namespace gvf::testing
