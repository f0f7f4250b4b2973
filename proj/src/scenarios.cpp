#include "windsched/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace windsched {

namespace {

// Acklam's rational approximation refined with one Halley step on erfc.
double normal_quantile_raw(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > 1 - plow) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  double x = normal_quantile_raw(p);
  // Halley refinement: F(x) - p with F the standard normal CDF
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1 + x * u / 2);
  return x;
}

double gamma_multiplier(GammaRule rule, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("gamma_multiplier: epsilon must lie in (0,1)");
  switch (rule) {
    case GammaRule::Gaussian:
      return normal_quantile(1.0 - epsilon);
    case GammaRule::Cantelli:
      return std::sqrt((1.0 - epsilon) / epsilon);
  }
  throw std::logic_error("unknown gamma rule");
}

GammaRule gamma_rule_from_string(const std::string& name) {
  if (name == "gaussian") return GammaRule::Gaussian;
  if (name == "cantelli") return GammaRule::Cantelli;
  throw std::invalid_argument("gamma rule must be 'gaussian' or 'cantelli'");
}

std::string to_string(GammaRule rule) {
  return rule == GammaRule::Gaussian ? "gaussian" : "cantelli";
}

ScenarioSet::ScenarioSet(Eigen::MatrixXd dev, std::string source)
    : dev_(std::move(dev)), source_(std::move(source)) {
  if (dev_.rows() < 1) throw std::invalid_argument("scenario set: N must be >= 1");
  if (!dev_.allFinite())
    throw std::invalid_argument("scenario set: non-finite deviations");
}

ScenarioSet ScenarioSet::from_matrix(Eigen::MatrixXd deviations,
                                     std::string source) {
  return ScenarioSet(std::move(deviations), std::move(source));
}

ScenarioSet ScenarioSet::gaussian(int n, const Eigen::VectorXd& means,
                                  const Eigen::VectorXd& stds,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gaussian scenarios: n must be >= 1");
  if (means.size() != stds.size())
    throw std::invalid_argument("gaussian scenarios: means/stds size mismatch");
  for (int i = 0; i < stds.size(); ++i)
    if (stds[i] < 0)
      throw std::invalid_argument("gaussian scenarios: negative std");

  // inverse-CDF sampling from mt19937_64 keeps the stream portable across
  // standard libraries
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd dev(n, means.size());
  const double scale = 1.0 / 18446744073709551616.0;  // 2^-64
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < means.size(); ++c) {
      const double u = (static_cast<double>(rng()) + 0.5) * scale;
      dev(r, c) = means[c] + stds[c] * normal_quantile(u);
    }
  std::ostringstream tag;
  tag << "gaussian(seed=" << seed << ",n=" << n << ")";
  return ScenarioSet(std::move(dev), tag.str());
}

ScenarioSet ScenarioSet::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario csv: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty scenario csv: " + path);
  // header row: w1,...,wK
  int cols = 1;
  for (char ch : line)
    if (ch == ',') ++cols;
  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    int c = 0;
    while (std::getline(ls, cell, ',')) {
      values.push_back(std::stod(cell));
      ++c;
    }
    if (c != cols)
      throw std::invalid_argument("scenario csv row " + std::to_string(rows + 2) +
                                  ": expected " + std::to_string(cols) +
                                  " columns");
    ++rows;
  }
  Eigen::MatrixXd dev(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) dev(r, c) = values[r * cols + c];
  return ScenarioSet(std::move(dev), "csv:" + path);
}

double apply_cap(double delta_mw, double cap_mw, double forecast_mw) {
  const double headroom = cap_mw - forecast_mw;
  if (headroom < 0)
    throw std::domain_error("apply_cap: cap below forecast");
  return std::min(delta_mw, headroom);
}

Eigen::MatrixXd capped_deviations(const ScenarioSet& set,
                                  const Eigen::VectorXd& caps,
                                  const Eigen::VectorXd& forecasts) {
  if (caps.size() != set.num_farms() || forecasts.size() != set.num_farms())
    throw std::invalid_argument("capped_deviations: dimension mismatch");
  Eigen::MatrixXd out = set.deviations();
  for (int c = 0; c < out.cols(); ++c) {
    const double headroom = caps[c] - forecasts[c];
    if (headroom < 0) throw std::domain_error("capped_deviations: cap below forecast");
    out.col(c) = out.col(c).cwiseMin(headroom);
  }
  return out;
}

TruncatedMoments truncated_stats(const ScenarioSet& set,
                                 const Eigen::VectorXd& caps,
                                 const Eigen::VectorXd& forecasts) {
  if (set.size() < 2)
    throw std::invalid_argument("truncated_stats: need at least 2 scenarios");
  const Eigen::MatrixXd capped = capped_deviations(set, caps, forecasts);
  const int n = set.size();
  TruncatedMoments out;
  out.cap = caps;
  out.mean = capped.colwise().mean();
  out.stddev.resize(capped.cols());
  for (int c = 0; c < capped.cols(); ++c) {
    const double var =
        (capped.col(c).array() - out.mean[c]).square().sum() / (n - 1);
    out.stddev[c] = std::sqrt(std::max(0.0, var));
  }
  return out;
}

Eigen::MatrixXd uncertainty_flows(const Eigen::MatrixXd& wind_to_flow,
                                  const Eigen::MatrixXd& capped) {
  if (wind_to_flow.cols() != capped.cols())
    throw std::invalid_argument("uncertainty_flows: dimension mismatch");
  return capped * wind_to_flow.transpose();
}

Eigen::MatrixXd uncertainty_responses(const Eigen::VectorXd& beta,
                                      const Eigen::MatrixXd& capped) {
  const Eigen::VectorXd totals = capped.rowwise().sum();
  return -totals * beta.transpose();
}

double empirical_margin(const Eigen::VectorXd& values, double epsilon,
                        MarginSide side) {
  const int n = static_cast<int>(values.size());
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("empirical_margin: epsilon must lie in (0,1)");
  if (epsilon * n < 1.0)
    throw std::domain_error(
        "empirical_margin: insufficient scenarios for requested risk level");
  const int k = static_cast<int>(std::ceil(epsilon * n - 1e-12));  // 1-based
  std::vector<double> v(values.data(), values.data() + n);
  if (side == MarginSide::Upper) {
    std::nth_element(v.begin(), v.begin() + (n - k), v.end());
    return v[n - k];
  }
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[k - 1];
}

}  // namespace windsched
