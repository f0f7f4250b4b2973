#pragma once

#include <Eigen/Dense>
#include <functional>

namespace windsched {

// Continuous piecewise-linear function on [x0, xS] with strictly increasing
// breakpoints. Evaluation outside the domain is an error.
class PwlFunction {
 public:
  PwlFunction() = default;
  PwlFunction(Eigen::VectorXd breakpoints, Eigen::VectorXd values,
              double max_error = 0.0);

  double operator()(double x) const;
  const Eigen::VectorXd& breakpoints() const { return x_; }
  const Eigen::VectorXd& values() const { return y_; }
  int num_segments() const { return static_cast<int>(x_.size()) - 1; }
  double domain_lo() const { return x_[0]; }
  double domain_hi() const { return x_[x_.size() - 1]; }

  // sup |f - pwl| measured on the dense sampling grid at build time
  double max_error() const { return max_error_; }

  // Uniform-breakpoint approximation of fn on [lo, hi]; the stored max_error
  // is measured on a grid of dense_per_segment points per piece.
  static PwlFunction approximate(const std::function<double(double)>& fn,
                                 double lo, double hi, int segments,
                                 int dense_per_segment = 32);

 private:
  Eigen::VectorXd x_, y_;
  double max_error_ = 0.0;
};

}  // namespace windsched
