#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windsched/gp.hpp"
#include "windsched/grid.hpp"
#include "windsched/pwl.hpp"
#include "windsched/scenarios.hpp"

namespace windsched {

struct ConstraintId {
  enum class Kind { LineUpper, LineLower, GenUp, GenDown };
  Kind kind = Kind::LineUpper;
  int index = 0;
  std::string str() const;
};

// Per-farm moment samples on the cap enumeration grid.
struct MomentSamples {
  Eigen::VectorXd caps;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

// Enumerates caps wc0, wc0 + step, ... while they stay within the installed
// capacity, computing truncated moments of the farm's deviations at each cap.
MomentSamples gen_moment_samples(const ScenarioSet& set, int farm,
                                 double forecast, double capacity, double wc0,
                                 double step);

// Error-compensation samples: one row per cap vector, one column per chance
// constraint (line upper, line lower, generator up, generator down).
struct KappaSamples {
  Eigen::MatrixXd inputs;   // P x farms
  Eigen::MatrixXd margins;  // P x constraints: empirical bound tightenings
  Eigen::MatrixXd rough;    // P x constraints: moment-based part
  Eigen::MatrixXd targets;  // margins - rough
  std::vector<ConstraintId> ids;
};

// Cap vectors visited by the enumeration: the diagonal walk (all farms move
// together by their per-farm steps, clamped at capacity) plus optional
// Latin-hypercube fill-in points for multi-farm cases.
Eigen::MatrixXd build_kappa_grid(const GridCase& grid,
                                 const Eigen::VectorXd& wc0,
                                 const Eigen::VectorXd& step, int lhs_extra,
                                 std::uint64_t lhs_seed);

KappaSamples gen_kappa_samples(const ScenarioSet& set, const GridCase& grid,
                               const Sensitivities& sens,
                               const Eigen::MatrixXd& inputs, double gamma0,
                               double epsilon);

struct SurrogateConfig {
  double epsilon = 0.05;
  GammaRule gamma_rule = GammaRule::Gaussian;
  int pwl_segments = 10;
  int lhs_extra = 64;
  double wc0 = 0.0;   // 0: start at the forecast
  double t_wc = 0.0;  // 0: (capacity - wc0) / 20
  GpFitOptions gp;
};

struct FarmSurrogate {
  int farm = 0;
  GpModel mean_gp, std_gp;
  PwlFunction mean_pwl, std_pwl;
};

// Trained surrogates for one case + scenario set: moment surrogates per farm
// and an affine error-compensation coefficient vector per chance constraint.
struct SurrogateBundle {
  int version = 1;
  double epsilon = 0.05;
  GammaRule gamma_rule = GammaRule::Gaussian;
  double gamma0 = 0.0;
  std::vector<FarmSurrogate> farms;
  std::vector<ConstraintId> constraint_ids;
  Eigen::MatrixXd kappa_coeffs;   // constraints x farms
  Eigen::MatrixXd kappa_inputs;   // training cap vectors, P x farms
  Eigen::MatrixXd kappa_targets;  // P x constraints
  Eigen::MatrixXd kappa_rough;    // P x constraints
  Eigen::MatrixXd kappa_margins;  // P x constraints
  // grid metadata
  Eigen::VectorXd wc0, t_wc;
  int diag_points = 0;
  int lhs_extra = 0;
  int n_scenarios = 0;
  std::string scenario_source;
  int pwl_segments = 0;

  int kappa_index(const ConstraintId& id) const;
  double kappa_at(const ConstraintId& id, const Eigen::VectorXd& caps) const;

  std::string to_json() const;
  static SurrogateBundle from_json(const std::string& text);
  void save(const std::string& path) const;
  static SurrogateBundle load(const std::string& path);
};

SurrogateBundle build_bundle(const GridCase& grid, const Sensitivities& sens,
                             const ScenarioSet& set,
                             const SurrogateConfig& config);

}  // namespace windsched
