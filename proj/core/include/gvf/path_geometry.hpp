#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gvf {

/// Value, Jacobian and Hessian stack of the level functions at one point.
struct LevelSetEval {
  Eigen::VectorXd phi;                     // length m-1
  Eigen::MatrixXd jacobian;                // (m-1) x m
  std::vector<Eigen::MatrixXd> hessians;   // m-1 symmetric m x m matrices
};

/// A desired path described as the zero-level set of m-1 implicit functions
/// in R^m. Immutable once built; copies share the evaluator.
class PathGeometry {
 public:
  using Evaluator = std::function<LevelSetEval(const Eigen::VectorXd&)>;

  PathGeometry(std::string name, int dimension, Evaluator evaluator);

  /// Throws std::invalid_argument when p.size() != dimension() or when a
  /// user evaluator returns mis-shaped output.
  LevelSetEval evaluate(const Eigen::VectorXd& p) const;

  int dimension() const noexcept { return dimension_; }
  int codimension() const noexcept { return dimension_ - 1; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  int dimension_;
  std::shared_ptr<const Evaluator> evaluator_;
};

/// phi = ((px-x0)^2 + (py-y0)^2) / r^2 - 1
PathGeometry make_circle(double radius, const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// phi = ((px-x0)/a)^2 + ((py-y0)/b)^2 - 1
PathGeometry make_ellipse(double semi_x, double semi_y,
                          const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// Signed distance to the line through `point` along `direction` (2D).
PathGeometry make_line(const Eigen::Vector2d& point, const Eigen::Vector2d& direction);

/// phi1 = (px^2 + py^2) / r^2 - 1, phi2 = pz - z0. A horizontal circle in R^3.
PathGeometry make_cylinder_plane(double radius, double plane_height);

/// ||phi(p)||
double distance_to_path(const PathGeometry& path, const Eigen::VectorXd& p);

/// Radial distance equivalent of a normalized circle error: r*sqrt(phi+1) - r.
/// Requires phi >= -1.
double radial_error(double phi, double radius);

struct RankReport {
  bool full_rank = false;
  double sigma_min = 0.0;
};

inline constexpr double kDefaultRankTolerance = 1e-9;

/// Full rank iff the smallest singular value exceeds `tolerance`.
RankReport check_rank(const Eigen::MatrixXd& jacobian,
                      double tolerance = kDefaultRankTolerance);

}  // namespace gvf
