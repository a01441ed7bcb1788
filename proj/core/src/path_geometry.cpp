#include "gvf/path_geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace gvf {

PathGeometry::PathGeometry(std::string name, int dimension, Evaluator evaluator)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))) {
  if (dimension_ < 2) {
    throw std::invalid_argument("path dimension must be at least 2");
  }
  if (!*evaluator_) {
    throw std::invalid_argument("path evaluator is empty");
  }
}

LevelSetEval PathGeometry::evaluate(const Eigen::VectorXd& p) const {
  if (p.size() != dimension_) {
    std::ostringstream msg;
    msg << "path '" << name_ << "' expects a point of dimension " << dimension_
        << ", got " << p.size();
    throw std::invalid_argument(msg.str());
  }
  LevelSetEval out = (*evaluator_)(p);

  const int k = codimension();
  bool ok = out.phi.size() == k && out.jacobian.rows() == k &&
            out.jacobian.cols() == dimension_ &&
            static_cast<int>(out.hessians.size()) == k;
  for (const auto& h : out.hessians) {
    ok = ok && h.rows() == dimension_ && h.cols() == dimension_;
  }
  if (!ok) {
    throw std::invalid_argument("path '" + name_ + "' evaluator returned mis-shaped output");
  }
  return out;
}

PathGeometry make_circle(double radius, const Eigen::Vector2d& center) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("circle radius must be positive");
  }
  const double inv_r2 = 1.0 / (radius * radius);
  return PathGeometry("circle", 2, [=](const Eigen::VectorXd& p) {
    const Eigen::Vector2d d = p.head<2>() - center;
    LevelSetEval e;
    e.phi.resize(1);
    e.phi(0) = d.squaredNorm() * inv_r2 - 1.0;
    e.jacobian = (2.0 * inv_r2 * d).transpose();
    e.hessians = {Eigen::Matrix2d::Identity() * (2.0 * inv_r2)};
    return e;
  });
}

PathGeometry make_ellipse(double semi_x, double semi_y, const Eigen::Vector2d& center) {
  if (!(semi_x > 0.0) || !(semi_y > 0.0)) {
    throw std::invalid_argument("ellipse semi-axes must be positive");
  }
  const Eigen::Vector2d w(1.0 / (semi_x * semi_x), 1.0 / (semi_y * semi_y));
  return PathGeometry("ellipse", 2, [=](const Eigen::VectorXd& p) {
    const Eigen::Vector2d d = p.head<2>() - center;
    LevelSetEval e;
    e.phi.resize(1);
    e.phi(0) = w.dot(d.cwiseProduct(d)) - 1.0;
    e.jacobian = (2.0 * w.cwiseProduct(d)).transpose();
    e.hessians = {Eigen::Matrix2d(2.0 * w.asDiagonal())};
    return e;
  });
}

PathGeometry make_line(const Eigen::Vector2d& point, const Eigen::Vector2d& direction) {
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument("line direction must be a nonzero finite vector");
  }
  // Right-hand normal, so that E * normal points along `direction`.
  const Eigen::Vector2d normal = Eigen::Vector2d(direction.y(), -direction.x()) / len;
  return PathGeometry("line", 2, [=](const Eigen::VectorXd& p) {
    LevelSetEval e;
    e.phi.resize(1);
    e.phi(0) = normal.dot(p.head<2>() - point);
    e.jacobian = normal.transpose();
    e.hessians = {Eigen::Matrix2d::Zero()};
    return e;
  });
}

PathGeometry make_cylinder_plane(double radius, double plane_height) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("cylinder radius must be positive");
  }
  const double inv_r2 = 1.0 / (radius * radius);
  return PathGeometry("cylinder_plane", 3, [=](const Eigen::VectorXd& p) {
    LevelSetEval e;
    e.phi.resize(2);
    e.phi(0) = (p(0) * p(0) + p(1) * p(1)) * inv_r2 - 1.0;
    e.phi(1) = p(2) - plane_height;
    e.jacobian.resize(2, 3);
    e.jacobian << 2.0 * inv_r2 * p(0), 2.0 * inv_r2 * p(1), 0.0,
                  0.0, 0.0, 1.0;
    Eigen::Matrix3d h1 = Eigen::Matrix3d::Zero();
    h1(0, 0) = h1(1, 1) = 2.0 * inv_r2;
    e.hessians = {h1, Eigen::Matrix3d::Zero()};
    return e;
  });
}

double distance_to_path(const PathGeometry& path, const Eigen::VectorXd& p) {
  return path.evaluate(p).phi.norm();
}

double radial_error(double phi, double radius) {
  if (phi < -1.0) {
    throw std::invalid_argument("normalized circle error must be >= -1");
  }
  return radius * std::sqrt(phi + 1.0) - radius;
}

RankReport check_rank(const Eigen::MatrixXd& jacobian, double tolerance) {
  RankReport report;
  if (jacobian.size() == 0) {
    return report;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian);
  const auto& s = svd.singularValues();
  // Wide (m-1) x m matrix: min(rows, cols) singular values, sorted descending.
  report.sigma_min = s(s.size() - 1);
  report.full_rank = std::isfinite(report.sigma_min) && report.sigma_min > tolerance;
  return report;
}

}  // namespace gvf
