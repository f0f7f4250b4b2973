#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "windsched/scenarios.hpp"

using namespace windsched;

TEST_CASE("gaussian sampling hits the requested moments") {
  Eigen::VectorXd mean(1), std(1);
  mean << 0.0;
  std << 200.0;
  const ScenarioSet set = ScenarioSet::gaussian(10000, mean, std, 42);
  CHECK(set.size() == 10000);
  CHECK(set.num_farms() == 1);
  // CLT band: 3 * 200 / sqrt(10000) = 6 MW
  CHECK(std::abs(set.deviations().col(0).mean()) <= 6.0);
}

TEST_CASE("zero std collapses to the mean") {
  Eigen::VectorXd mean(2), std(2);
  mean << 5.0, -3.0;
  std << 0.0, 0.0;
  const ScenarioSet set = ScenarioSet::gaussian(100, mean, std, 1);
  CHECK((set.deviations().col(0).array() == 5.0).all());
  CHECK((set.deviations().col(1).array() == -3.0).all());
}

TEST_CASE("sampling is reproducible from the seed") {
  Eigen::VectorXd mean(3), std(3);
  mean.setZero();
  std << 10.0, 20.0, 30.0;
  const ScenarioSet a = ScenarioSet::gaussian(500, mean, std, 77);
  const ScenarioSet b = ScenarioSet::gaussian(500, mean, std, 77);
  CHECK((a.deviations() - b.deviations()).cwiseAbs().maxCoeff() == 0.0);

  const ScenarioSet c = ScenarioSet::gaussian(500, mean, std, 78);
  CHECK((a.deviations() - c.deviations()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("negative std is rejected") {
  Eigen::VectorXd mean(1), std(1);
  mean << 0.0;
  std << -1.0;
  CHECK_THROWS_AS(ScenarioSet::gaussian(10, mean, std, 1), std::invalid_argument);
}

TEST_CASE("cap application") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(apply_cap(50.0, 230.0, 200.0) == doctest::Approx(30.0));
  CHECK(apply_cap(-20.0, 230.0, 200.0) == doctest::Approx(-20.0));
  CHECK(apply_cap(123.0, inf, 200.0) == doctest::Approx(123.0));
  CHECK_THROWS_AS(apply_cap(0.0, 150.0, 200.0), std::domain_error);
}

TEST_CASE("truncated stats: no binding cap reproduces raw stats") {
  Eigen::MatrixXd dev(4, 1);
  dev << -10, 0, 10, 20;
  const ScenarioSet set = ScenarioSet::from_matrix(dev, "test");
  Eigen::VectorXd cap(1), fc(1);
  cap << 1000.0;
  fc << 200.0;
  const TruncatedMoments m = truncated_stats(set, cap, fc);
  CHECK(m.mean[0] == doctest::Approx(5.0));
  CHECK(m.stddev[0] == doctest::Approx(std::sqrt((225 + 25 + 25 + 225) / 3.0)));
}

TEST_CASE("truncated stats: hand-computed four-point oracle") {
  Eigen::MatrixXd dev(4, 1);
  dev << -10, 0, 10, 20;
  const ScenarioSet set = ScenarioSet::from_matrix(dev, "test");
  Eigen::VectorXd cap(1), fc(1);
  cap << 205.0;  // headroom 5
  fc << 200.0;
  const TruncatedMoments m = truncated_stats(set, cap, fc);
  // capped set {-10, 0, 5, 5}: mean 0, var (100+0+25+25)/3
  CHECK(m.mean[0] == doctest::Approx(0.0));
  CHECK(m.stddev[0] == doctest::Approx(std::sqrt(50.0)));
}

TEST_CASE("truncated stats: zero headroom pushes the mean negative") {
  Eigen::MatrixXd dev(6, 1);
  dev << -30, -20, -10, 10, 20, 30;  // symmetric, zero mean
  const ScenarioSet set = ScenarioSet::from_matrix(dev, "test");
  Eigen::VectorXd cap(1), fc(1);
  cap << 200.0;
  fc << 200.0;
  const TruncatedMoments m = truncated_stats(set, cap, fc);
  // brute force over the sample set
  double acc = 0;
  for (double d : {-30.0, -20.0, -10.0, 10.0, 20.0, 30.0}) acc += std::min(d, 0.0);
  CHECK(m.mean[0] == doctest::Approx(acc / 6.0));
  CHECK(m.mean[0] < 0.0);
}

TEST_CASE("pathwise cap monotonicity implies monotone truncated means") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist(0.0, 50.0);
  Eigen::MatrixXd dev(200, 2);
  for (int r = 0; r < 200; ++r)
    for (int c = 0; c < 2; ++c) dev(r, c) = dist(rng);
  const ScenarioSet set = ScenarioSet::from_matrix(dev, "test");
  Eigen::VectorXd fc(2);
  fc << 100.0, 100.0;
  Eigen::VectorXd lo_cap(2), hi_cap(2);
  lo_cap << 120.0, 130.0;
  hi_cap << 140.0, 135.0;
  const Eigen::MatrixXd capped_lo = capped_deviations(set, lo_cap, fc);
  const Eigen::MatrixXd capped_hi = capped_deviations(set, hi_cap, fc);
  CHECK(((capped_hi - capped_lo).array() >= 0.0).all());
  const TruncatedMoments m_lo = truncated_stats(set, lo_cap, fc);
  const TruncatedMoments m_hi = truncated_stats(set, hi_cap, fc);
  CHECK(m_hi.mean[0] >= m_lo.mean[0]);
  CHECK(m_hi.mean[1] >= m_lo.mean[1]);
}

TEST_CASE("uncertainty flows and responses") {
  Eigen::MatrixXd k(2, 1);
  k << 0.4, -0.2;
  {
    Eigen::MatrixXd capped = Eigen::MatrixXd::Zero(5, 1);
    CHECK(uncertainty_flows(k, capped).cwiseAbs().maxCoeff() == 0.0);
  }
  {
    Eigen::MatrixXd capped(1, 1);
    capped << 100.0;
    const Eigen::MatrixXd flows = uncertainty_flows(k, capped);
    CHECK(flows(0, 0) == doctest::Approx(40.0));
    CHECK(flows(0, 1) == doctest::Approx(-20.0));
  }
  {
    Eigen::VectorXd beta(2);
    beta << 0.25, 0.75;
    Eigen::MatrixXd capped(1, 2);
    capped << -60.0, -40.0;  // sum -100
    const Eigen::MatrixXd resp = uncertainty_responses(beta, capped);
    CHECK(resp(0, 0) == doctest::Approx(25.0));
    CHECK(resp(0, 1) == doctest::Approx(75.0));
  }
}

TEST_CASE("responses balance the deviations in every scenario") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 30.0);
  Eigen::MatrixXd dev(100, 3);
  for (int r = 0; r < 100; ++r)
    for (int c = 0; c < 3; ++c) dev(r, c) = dist(rng);
  Eigen::VectorXd beta(4);
  beta << 0.1, 0.2, 0.3, 0.4;
  const Eigen::MatrixXd resp = uncertainty_responses(beta, dev);
  const Eigen::VectorXd total = resp.rowwise().sum() + dev.rowwise().sum();
  CHECK(total.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("uncertainty flows are linear") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> dist(0.0, 10.0);
  Eigen::MatrixXd k(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) k(r, c) = dist(rng) / 10.0;
  Eigen::MatrixXd d1(20, 2), d2(20, 2);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 2; ++c) {
      d1(r, c) = dist(rng);
      d2(r, c) = dist(rng);
    }
  const Eigen::MatrixXd lhs = uncertainty_flows(k, 2.0 * d1 - 3.0 * d2);
  const Eigen::MatrixXd rhs =
      2.0 * uncertainty_flows(k, d1) - 3.0 * uncertainty_flows(k, d2);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("empirical margin order statistics") {
  {
    Eigen::VectorXd v(10000);
    for (int i = 0; i < 10000; ++i) v[i] = i + 1;  // 1..10000
    // 500th largest
    CHECK(empirical_margin(v, 0.05, MarginSide::Upper) == doctest::Approx(9501.0));
  }
  {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(50, 3.25);
    CHECK(empirical_margin(v, 0.1, MarginSide::Upper) == doctest::Approx(3.25));
    CHECK(empirical_margin(v, 0.1, MarginSide::Lower) == doctest::Approx(3.25));
  }
  {
    Eigen::VectorXd v(100);
    for (int i = 0; i < 100; ++i) v[i] = i + 1;  // 1..100
    CHECK(empirical_margin(v, 0.05, MarginSide::Upper) == doctest::Approx(96.0));
    CHECK(empirical_margin(v, 0.05, MarginSide::Lower) == doctest::Approx(5.0));
  }
  {
    Eigen::VectorXd v(10);
    v.setOnes();
    CHECK_THROWS_WITH_AS(empirical_margin(v, 0.05, MarginSide::Upper),
                         doctest::Contains("insufficient scenarios"),
                         std::domain_error);
  }
}

TEST_CASE("empirical margin matches a full-sort oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 50 + static_cast<int>(rng() % 200);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    const double eps = 0.02 + 0.2 * (trial / 20.0);
    if (eps * n < 1) continue;
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end());
    const int k = static_cast<int>(std::ceil(eps * n - 1e-12));
    CHECK(empirical_margin(v, eps, MarginSide::Upper) ==
          doctest::Approx(sorted[n - k]).epsilon(1e-14));
    CHECK(empirical_margin(v, eps, MarginSide::Lower) ==
          doctest::Approx(sorted[k - 1]).epsilon(1e-14));
  }
}

TEST_CASE("empirical margin equivariance and violation certificate") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist(0.0, 5.0);
  Eigen::VectorXd v(400);
  for (int i = 0; i < 400; ++i) v[i] = dist(rng);
  const double eps = 0.07;
  const double m = empirical_margin(v, eps, MarginSide::Upper);

  // shift and scale equivariance
  CHECK(empirical_margin((v.array() + 11.5).matrix(), eps, MarginSide::Upper) ==
        doctest::Approx(m + 11.5).epsilon(1e-13));
  CHECK(empirical_margin(3.0 * v, eps, MarginSide::Upper) ==
        doctest::Approx(3.0 * m).epsilon(1e-13));

  // at most eps*N scenarios exceed the margin
  int above = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] > m) ++above;
  CHECK(above <= static_cast<int>(eps * v.size()));
}

TEST_CASE("normal quantile and gamma rules") {
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(gamma_multiplier(GammaRule::Gaussian, 0.05) ==
        doctest::Approx(1.6449).epsilon(1e-4));
  CHECK(gamma_multiplier(GammaRule::Cantelli, 0.05) ==
        doctest::Approx(std::sqrt(0.95 / 0.05)).epsilon(1e-12));
}
