#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace windsched {

// Standard normal quantile (inverse CDF), |err| < 1e-14 over (0,1).
double normal_quantile(double p);

// Quantile multiplier applied to the standard-deviation term of a chance
// constraint margin.
enum class GammaRule { Gaussian, Cantelli };
double gamma_multiplier(GammaRule rule, double epsilon);
GammaRule gamma_rule_from_string(const std::string& name);
std::string to_string(GammaRule rule);

// Wind deviation scenarios, one row per scenario, one column per farm (MW).
// Immutable after creation; carries its provenance for result manifests.
class ScenarioSet {
 public:
  static ScenarioSet gaussian(int n, const Eigen::VectorXd& means,
                              const Eigen::VectorXd& stds, std::uint64_t seed);
  static ScenarioSet from_csv(const std::string& path);
  static ScenarioSet from_matrix(Eigen::MatrixXd deviations, std::string source);

  const Eigen::MatrixXd& deviations() const { return dev_; }
  int size() const { return static_cast<int>(dev_.rows()); }
  int num_farms() const { return static_cast<int>(dev_.cols()); }
  const std::string& source() const { return source_; }

 private:
  ScenarioSet(Eigen::MatrixXd dev, std::string source);
  Eigen::MatrixXd dev_;
  std::string source_;
};

// min(delta, cap - forecast); cap below the forecast is a domain error.
double apply_cap(double delta_mw, double cap_mw, double forecast_mw);

// Per-scenario capped deviations for a full cap vector.
Eigen::MatrixXd capped_deviations(const ScenarioSet& set,
                                  const Eigen::VectorXd& caps,
                                  const Eigen::VectorXd& forecasts);

struct TruncatedMoments {
  Eigen::VectorXd mean;    // MW, per farm
  Eigen::VectorXd stddev;  // MW, sample std (N-1), per farm
  Eigen::VectorXd cap;     // the cap vector these stats belong to
};

TruncatedMoments truncated_stats(const ScenarioSet& set,
                                 const Eigen::VectorXd& caps,
                                 const Eigen::VectorXd& forecasts);

// Line-flow shifts caused by capped wind deviations: N x lines.
Eigen::MatrixXd uncertainty_flows(const Eigen::MatrixXd& wind_to_flow,
                                  const Eigen::MatrixXd& capped);

// Generator balancing responses: N x generators; row sums cancel the wind
// deviation total.
Eigen::MatrixXd uncertainty_responses(const Eigen::VectorXd& beta,
                                      const Eigen::MatrixXd& capped);

enum class MarginSide { Upper, Lower };

// The ceil(eps*N)-th largest (upper) or smallest (lower) of the values; the
// empirical quantile that at most eps*N scenarios exceed.
double empirical_margin(const Eigen::VectorXd& values, double epsilon,
                        MarginSide side);

}  // namespace windsched
