#pragma once

#include <stdexcept>
#include <string>

namespace gvf {

/// Level-set Jacobian lost rank, so the inverse-kinematics solve is undefined.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min_(sigma_min) {}

  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

/// A derivative or state became non-finite during integration.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gvf
