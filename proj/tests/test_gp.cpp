#include <doctest.h>

#include <cmath>
#include <random>

#include "windsched/gp.hpp"
#include "windsched/pwl.hpp"

using namespace windsched;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

}  // namespace

TEST_CASE("kernel evaluations") {
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 2.0;
  b << 1.0, 2.0;
  CHECK(kernel_eval(KernelKind::SquaredExponential, 3.0, 5.0, a, b) ==
        doctest::Approx(9.0));

  b << 1000.0, -1000.0;
  CHECK(kernel_eval(KernelKind::SquaredExponential, 3.0, 5.0, a, b) <= 1e-12);

  a << 2.0, 0.0;
  b << 0.0, 3.0;
  CHECK(kernel_eval(KernelKind::Linear, 1.0, 2.0, a, b) == doctest::Approx(0.0));
  CHECK_THROWS_AS(kernel_eval(KernelKind::Linear, 1.0, 0.0, a, b),
                  std::domain_error);
}

TEST_CASE("fit rejects degenerate training sets") {
  Eigen::MatrixXd x(1, 1);
  x << 1.0;
  Eigen::VectorXd y(1);
  y << 2.0;
  CHECK_THROWS_AS(gp_fit(x, y, KernelKind::SquaredExponential),
                  std::invalid_argument);
}

TEST_CASE("two-point fit interpolates its targets") {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 10.0;
  Eigen::VectorXd y(2);
  y << 1.0, 3.0;
  const GpModel gp = gp_fit(x, y, KernelKind::SquaredExponential);
  CHECK(gp.predict1(0.0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(gp.predict1(10.0) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("linear kernel reproduces a linear map") {
  Eigen::MatrixXd x(6, 1);
  x << 1, 2, 3, 4, 5, 6;
  Eigen::VectorXd y = 3.0 * x.col(0);
  const GpModel gp = gp_fit(x, y, KernelKind::Linear);
  for (double t : {1.5, 3.3, 5.9})
    CHECK(gp.predict1(t) == doctest::Approx(3.0 * t).epsilon(1e-6));
}

TEST_CASE("zero targets give a zero model") {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  const GpModel gp = gp_fit(x, Eigen::VectorXd::Zero(4), KernelKind::Linear);
  CHECK(gp.weights.cwiseAbs().maxCoeff() == 0.0);
  CHECK(gp.predict1(2.5) == 0.0);
}

TEST_CASE("prediction is the weighted kernel sum") {
  // compare against a direct evaluation of the kernel expansion
  Eigen::MatrixXd x(5, 1);
  x << 1, 3, 5, 7, 9;
  Eigen::VectorXd y(5);
  y << 2.0, 1.0, 4.0, 1.0, 2.0;
  const GpModel gp = gp_fit(x, y, KernelKind::SquaredExponential);
  double direct = 0.0;
  for (int k = 0; k < 5; ++k)
    direct += gp.weights[k] * kernel_eval(KernelKind::SquaredExponential,
                                          gp.amplitude, gp.length,
                                          x.row(k).transpose(), vec1(5.0));
  CHECK(gp.predict1(5.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("noise-free interpolation error stays within 1e-4 of scale") {
  Eigen::MatrixXd x(21, 1);
  Eigen::VectorXd y(21);
  for (int i = 0; i <= 20; ++i) {
    x(i, 0) = 200.0 + 20.0 * i;
    y[i] = -40.0 * std::exp(-std::pow((x(i, 0) - 300.0) / 120.0, 2));
  }
  const GpModel gp = gp_fit(x, y, KernelKind::SquaredExponential);
  const double scale = y.cwiseAbs().maxCoeff();
  for (int i = 0; i <= 20; ++i)
    CHECK(std::abs(gp.predict1(x(i, 0)) - y[i]) <= 1e-4 * scale);
}

TEST_CASE("linear kernel collapses to a coefficient vector") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(200.0, 400.0);
  Eigen::MatrixXd x(30, 4);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    for (int c = 0; c < 4; ++c) x(i, c) = u(rng);
    y[i] = 0.3 * x(i, 0) - 0.1 * x(i, 1) + 0.05 * x(i, 2) - 0.2 * x(i, 3);
  }
  const GpModel gp = gp_fit(x, y, KernelKind::Linear);
  const Eigen::VectorXd w = gp.linear_coefficients();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd q(4);
    for (int c = 0; c < 4; ++c) q[c] = u(rng);
    CHECK(std::abs(gp.predict(q) - w.dot(q)) <=
          1e-10 * std::max(1.0, std::abs(w.dot(q))));
  }
}

TEST_CASE("extrapolation is flagged by the hull test") {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  const GpModel gp = gp_fit(x, y, KernelKind::SquaredExponential);
  CHECK(gp.in_training_hull(vec1(2.5)));
  CHECK(!gp.in_training_hull(vec1(4.0)));
}

TEST_CASE("pwl evaluation and domain checks") {
  Eigen::VectorXd bx(3), by(3);
  bx << 0.0, 1.0, 3.0;
  by << 0.0, 2.0, 0.0;
  const PwlFunction f(bx, by);
  CHECK(f(0.5) == doctest::Approx(1.0));
  CHECK(f(2.0) == doctest::Approx(1.0));
  CHECK(f(3.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(f(-0.1), std::domain_error);
  CHECK_THROWS_AS(f(3.1), std::domain_error);
  CHECK_THROWS_AS(PwlFunction(by, bx), std::invalid_argument);  // not increasing
}

TEST_CASE("single-segment pwl matches a linear function exactly") {
  const auto f = [](double x) { return 2.0 * x - 7.0; };
  const PwlFunction p = PwlFunction::approximate(f, 1.0, 5.0, 1);
  CHECK(p(1.0) == doctest::Approx(f(1.0)));
  CHECK(p(5.0) == doctest::Approx(f(5.0)));
  CHECK(p.max_error() <= 1e-12);
}

TEST_CASE("pwl error decreases monotonically as segments double") {
  const auto f = [](double x) { return std::sin(x / 40.0) * 25.0; };
  double prev = 1e300;
  for (int segments : {2, 4, 8, 16, 32}) {
    const PwlFunction p = PwlFunction::approximate(f, 0.0, 200.0, segments);
    CHECK(p.max_error() < prev);
    prev = p.max_error();
  }
}
