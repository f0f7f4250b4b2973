#pragma once

#include <optional>
#include <string>
#include <vector>

#include "windsched/branch_bound.hpp"
#include "windsched/conic.hpp"
#include "windsched/grid.hpp"
#include "windsched/scenarios.hpp"
#include "windsched/surrogate.hpp"

namespace windsched {

// Fixed wind-deviation moments for the traditional reformulation.
struct FixedMoments {
  Eigen::VectorXd mean;    // per farm, MW
  Eigen::VectorXd stddev;  // per farm, MW
};

struct ScheduleVarMap {
  int n_gens = 0, n_farms = 0, n_lines = 0, segments = 0;
  int p_sc0 = 0, r_up0 = 0, r_dn0 = 0;
  int wc0 = -1;        // -1 when the model carries no cap variables
  int lam_flow0 = -1;  // flow std-dev slack variables
  int lam_gen0 = -1;   // reserve std-dev slack variables
  int weights0 = -1;   // pwl convex-combination weights, (segments+1) per farm
  int binaries0 = -1;  // pwl segment selectors, segments per farm

  int p_sc(int g) const { return p_sc0 + g; }
  int r_up(int g) const { return r_up0 + g; }
  int r_dn(int g) const { return r_dn0 + g; }
  int wc(int f) const { return wc0 + f; }
  int lam_flow(int l) const { return lam_flow0 + l; }
  int lam_gen(int g) const { return lam_gen0 + g; }
  int weight(int f, int s) const { return weights0 + f * (segments + 1) + s; }
  int binary(int f, int t) const { return binaries0 + f * segments + t; }
};

struct ScheduleProblem {
  ConicProgram prog;
  ScheduleVarMap map;
  std::string method;  // "m0" | "m1" | "correction"
  double epsilon = 0.0;
  double gamma0 = 0.0;
  Eigen::VectorXd base_flow;  // PTDF . (forecast - demand) injections, per line
  // constant-margin models (m1/correction)
  Eigen::VectorXd const_margin;   // 2L + 2G entries, empty for m0
  Eigen::VectorXd const_kappa;    // compensation part of const_margin
  Eigen::VectorXd fixed_caps;     // caps the constants were evaluated at
  Eigen::VectorXd moments_mean;   // per-farm moment constants
  Eigen::VectorXd moments_std;
  // m0 internals: surrogate values at the PWL breakpoints and the affine
  // compensation coefficients, for exact objective accounting
  Eigen::MatrixXd pwl_mean;       // farms x (segments+1)
  Eigen::MatrixXd pwl_std;
  Eigen::MatrixXd kappa_coeffs;   // constraints x farms

  double mu_values(int f, int s) const { return pwl_mean(f, s); }
  double sig_values(int f, int s) const { return pwl_std(f, s); }
  Eigen::VectorXd kappa_coeffs_row(int idx) const { return kappa_coeffs.row(idx); }
};

struct MarginBreakdown {
  ConstraintId id;
  double rough = 0.0;
  double compensation = 0.0;
  double total = 0.0;
};

struct DispatchSolution {
  std::string method;  // "m0" | "m1"
  std::string stage;   // "misocp" | "corrected" | "fixed-moments"
  Eigen::VectorXd p_sc, r_up, r_dn;
  Eigen::VectorXd caps;                // per farm; +inf marks "uncapped"
  Eigen::VectorXd mean_at_caps;        // per farm, as used by the objective
  Eigen::VectorXd std_at_caps;         // per farm
  Eigen::VectorXd flow_std, gen_std;   // std-dev slack values
  double objective = 0.0;
  double energy_cost = 0.0;
  double reserve_cost = 0.0;
  std::vector<MarginBreakdown> margins;
  Solution solver;

  double total_up() const { return r_up.sum(); }
  double total_dn() const { return r_dn.sum(); }

  std::string to_json() const;
  static DispatchSolution from_json(const std::string& text);
  void save(const std::string& path) const;
  static DispatchSolution load(const std::string& path);
};

enum class CapPolicy { Free, FixedAtCapacity };

// Constant-margin scheduling program shared by the traditional baseline and
// the correction step: margin_c = rough_c(mean, stddev) + kappa_c, folded
// into the linear rows.
ScheduleProblem build_fixed_margins(const GridCase& grid,
                                    const PtdfMatrix& ptdf,
                                    const Sensitivities& sens,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::VectorXd& stddev,
                                    const Eigen::VectorXd& kappa,
                                    double epsilon, double gamma0,
                                    const std::string& method);

// Traditional reformulation: moments are constants, margins fold into the
// linear rows, no curtailment variables. fixed_caps (optional) records the
// caps the moments were computed at, +inf meaning uncapped.
ScheduleProblem build_m1(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens, const FixedMoments& moments,
                         double epsilon, double gamma0,
                         const Eigen::VectorXd& fixed_caps = {});

// Data-driven co-optimization: curtailment caps are decision variables tied
// to moment surrogates by the convex-combination PWL encoding with segment
// binaries; error compensation enters affinely in the caps.
ScheduleProblem build_m0(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens,
                         const SurrogateBundle& bundle, double epsilon,
                         CapPolicy policy = CapPolicy::Free);

DispatchSolution extract_solution(const ScheduleProblem& sp,
                                  const GridCase& grid,
                                  const Sensitivities& sens,
                                  const Solution& sol);

// Post-optimization accuracy restoration: caps fixed at the incumbent values,
// surrogate terms replaced by constants, and the remaining linear program
// re-solved.
enum class CorrectionMode { Empirical, SeGp, Surrogate };
CorrectionMode correction_mode_from_string(const std::string& s);
std::string to_string(CorrectionMode m);

DispatchSolution correct(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens, const ScenarioSet& set,
                         const SurrogateBundle& bundle,
                         const DispatchSolution& m0_solution, double epsilon,
                         CorrectionMode mode,
                         const SolveOptions& opts = {});

struct PipelineConfig {
  SurrogateConfig surrogate;
  MisocpOptions misocp;
  CorrectionMode correction = CorrectionMode::Empirical;
  CapPolicy caps = CapPolicy::Free;
};

struct PipelineResult {
  SurrogateBundle bundle;
  DispatchSolution misocp_stage;
  DispatchSolution corrected;
};

// Full data-driven pipeline: train surrogates, solve the MI-SOCP, run the
// correction step.
PipelineResult solve_schedule(const GridCase& grid, const ScenarioSet& set,
                              const PipelineConfig& config);

}  // namespace windsched
