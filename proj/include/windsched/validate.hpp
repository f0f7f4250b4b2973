#pragma once

#include <string>
#include <vector>

#include "windsched/grid.hpp"
#include "windsched/model.hpp"
#include "windsched/scenarios.hpp"

namespace windsched {

struct TraceRequest {
  std::vector<int> lines;  // 1-based line ids to trace
  std::vector<int> gens;   // 1-based generator ids to trace
};

struct ViolationReport {
  Eigen::VectorXd line_upper_freq, line_lower_freq;  // per line
  Eigen::VectorXd gen_up_freq, gen_dn_freq;          // per generator
  double max_line_violation = 0.0;
  double max_gen_violation = 0.0;
  int n = 0;
  std::string scenario_source;
  bool seed_collision_warning = false;
  // optional per-scenario traces for plotting
  std::vector<std::string> trace_names;
  Eigen::MatrixXd traces;  // n x trace_names.size()

  std::string to_json() const;
  void save(const std::string& path) const;
  void save_traces_csv(const std::string& path) const;
};

// Counts per-scenario constraint violations of a dispatch by full
// recomputation from raw case data (PTDF times bus injections), independent
// of the optimizer's constraint matrices.
ViolationReport monte_carlo_violation(const DispatchSolution& sol,
                                      const GridCase& grid,
                                      const PtdfMatrix& ptdf,
                                      const Sensitivities& sens,
                                      const ScenarioSet& set,
                                      const TraceRequest& traces = {});

struct CostBreakdown {
  double energy = 0.0;
  double reserve = 0.0;
  double total = 0.0;
  double total_up_mw = 0.0;
  double total_dn_mw = 0.0;
};

// Expected-cost accounting at the solution's cap-dependent means.
CostBreakdown cost_report(const DispatchSolution& sol, const GridCase& grid,
                          const Sensitivities& sens,
                          const Eigen::VectorXd& mean_at_caps);

}  // namespace windsched
