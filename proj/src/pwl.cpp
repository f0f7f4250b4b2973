#include "windsched/pwl.hpp"

#include <cmath>
#include <stdexcept>

namespace windsched {

PwlFunction::PwlFunction(Eigen::VectorXd breakpoints, Eigen::VectorXd values,
                         double max_error)
    : x_(std::move(breakpoints)), y_(std::move(values)), max_error_(max_error) {
  if (x_.size() < 2 || x_.size() != y_.size())
    throw std::invalid_argument("pwl: need matching breakpoints/values, >= 2");
  for (int i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("pwl: breakpoints must be strictly increasing");
}

double PwlFunction::operator()(double x) const {
  const double lo = x_[0], hi = x_[x_.size() - 1];
  const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
  if (x < lo - slack || x > hi + slack)
    throw std::domain_error("pwl: evaluation outside domain");
  x = std::min(std::max(x, lo), hi);
  int a = 0, b = static_cast<int>(x_.size()) - 1;
  while (b - a > 1) {
    const int m = (a + b) / 2;
    (x_[m] <= x ? a : b) = m;
  }
  const double t = (x - x_[a]) / (x_[a + 1] - x_[a]);
  return y_[a] + t * (y_[a + 1] - y_[a]);
}

PwlFunction PwlFunction::approximate(const std::function<double(double)>& fn,
                                     double lo, double hi, int segments,
                                     int dense_per_segment) {
  if (segments < 1) throw std::invalid_argument("pwl: segments must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("pwl: empty domain");
  Eigen::VectorXd x(segments + 1), y(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    x[i] = lo + (hi - lo) * i / segments;
    y[i] = fn(x[i]);
  }
  PwlFunction out(x, y, 0.0);
  double err = 0.0;
  const int dense = segments * std::max(2, dense_per_segment);
  for (int i = 0; i <= dense; ++i) {
    const double xx = lo + (hi - lo) * i / dense;
    err = std::max(err, std::abs(fn(xx) - out(xx)));
  }
  out.max_error_ = err;
  return out;
}

}  // namespace windsched
