#include "windsched/validate.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace windsched {

using nlohmann::json;

ViolationReport monte_carlo_violation(const DispatchSolution& sol,
                                      const GridCase& grid,
                                      const PtdfMatrix& ptdf,
                                      const Sensitivities& sens,
                                      const ScenarioSet& set,
                                      const TraceRequest& traces) {
  const int nl = grid.num_lines();
  const int ng = grid.num_generators();
  const int nf = grid.num_wind_farms();
  const int n = set.size();
  if (sol.caps.size() != nf)
    throw std::invalid_argument("monte_carlo_violation: caps/farms mismatch");
  if (set.num_farms() != nf)
    throw std::invalid_argument("monte_carlo_violation: scenario/farms mismatch");

  const Eigen::MatrixXd capped =
      capped_deviations(set, sol.caps, grid.wind_forecasts());
  const Eigen::VectorXd totals = capped.rowwise().sum();

  // scheduled flows and uncertainty flows, both via PTDF on bus injections
  Eigen::VectorXd inj = Eigen::VectorXd::Zero(grid.num_buses());
  for (const auto& b : grid.buses()) inj[grid.bus_index(b.id)] -= b.demand_mw;
  for (const auto& w : grid.wind_farms())
    inj[grid.bus_index(w.bus)] += w.forecast_mw;
  for (int g = 0; g < ng; ++g)
    inj[grid.bus_index(grid.generators()[g].bus)] += sol.p_sc[g];
  const Eigen::VectorXd pf_sc = ptdf.factors * inj;

  Eigen::MatrixXd wind_cols(grid.num_buses(), nf);
  for (int f = 0; f < nf; ++f)
    wind_cols.col(f) = Eigen::VectorXd::Unit(grid.num_buses(),
                                             grid.bus_index(grid.wind_farms()[f].bus));
  Eigen::VectorXd gen_beta_bus = Eigen::VectorXd::Zero(grid.num_buses());
  for (int g = 0; g < ng; ++g)
    gen_beta_bus[grid.bus_index(grid.generators()[g].bus)] += sens.beta[g];
  // delta injection per scenario = wind deviations at wind buses minus the
  // balancing response at generator buses
  const Eigen::MatrixXd ptdf_wind = ptdf.factors * wind_cols;       // L x F
  const Eigen::VectorXd ptdf_resp = ptdf.factors * gen_beta_bus;    // L
  const Eigen::MatrixXd delta_flows =
      capped * ptdf_wind.transpose() - totals * ptdf_resp.transpose();  // N x L

  ViolationReport rep;
  rep.n = n;
  rep.scenario_source = set.source();
  rep.line_upper_freq.setZero(nl);
  rep.line_lower_freq.setZero(nl);
  rep.gen_up_freq.setZero(ng);
  rep.gen_dn_freq.setZero(ng);

  for (int l = 0; l < nl; ++l) {
    const double lim = grid.lines()[l].limit_mw;
    int up = 0, dn = 0;
    for (int i = 0; i < n; ++i) {
      const double pf = pf_sc[l] + delta_flows(i, l);
      if (pf > lim) ++up;
      if (pf < -lim) ++dn;
    }
    rep.line_upper_freq[l] = static_cast<double>(up) / n;
    rep.line_lower_freq[l] = static_cast<double>(dn) / n;
  }
  for (int g = 0; g < ng; ++g) {
    const double beta = sens.beta[g];
    int up = 0, dn = 0;
    for (int i = 0; i < n; ++i) {
      const double resp = -beta * totals[i];
      if (resp > sol.r_up[g]) ++up;
      if (resp < -sol.r_dn[g]) ++dn;
    }
    rep.gen_up_freq[g] = static_cast<double>(up) / n;
    rep.gen_dn_freq[g] = static_cast<double>(dn) / n;
  }
  rep.max_line_violation =
      std::max(nl ? rep.line_upper_freq.maxCoeff() : 0.0,
               nl ? rep.line_lower_freq.maxCoeff() : 0.0);
  rep.max_gen_violation = std::max(ng ? rep.gen_up_freq.maxCoeff() : 0.0,
                                   ng ? rep.gen_dn_freq.maxCoeff() : 0.0);

  // optional traces: realized line flows and generator outputs
  int t_cols = static_cast<int>(traces.lines.size() + traces.gens.size());
  if (t_cols > 0) {
    rep.traces.resize(n, t_cols);
    int col = 0;
    for (int line_id : traces.lines) {
      int l = -1;
      for (int i = 0; i < nl; ++i)
        if (grid.lines()[i].id == line_id) l = i;
      if (l < 0)
        throw std::invalid_argument("trace: unknown line id " +
                                    std::to_string(line_id));
      rep.trace_names.push_back("line_" + std::to_string(line_id) + "_flow_mw");
      rep.traces.col(col++) =
          delta_flows.col(l).array() + pf_sc[l];
    }
    for (int gen_id : traces.gens) {
      int g = -1;
      for (int i = 0; i < ng; ++i)
        if (grid.generators()[i].id == gen_id) g = i;
      if (g < 0)
        throw std::invalid_argument("trace: unknown generator id " +
                                    std::to_string(gen_id));
      rep.trace_names.push_back("gen_" + std::to_string(gen_id) + "_output_mw");
      rep.traces.col(col++) = (-sens.beta[g] * totals).array() + sol.p_sc[g];
    }
  }
  return rep;
}

CostBreakdown cost_report(const DispatchSolution& sol, const GridCase& grid,
                          const Sensitivities& sens,
                          const Eigen::VectorXd& mean_at_caps) {
  CostBreakdown out;
  double ce_beta = 0.0;
  for (int g = 0; g < grid.num_generators(); ++g)
    ce_beta += grid.generators()[g].energy_cost * sens.beta[g];
  for (int g = 0; g < grid.num_generators(); ++g) {
    out.energy += grid.generators()[g].energy_cost * sol.p_sc[g];
    out.reserve +=
        grid.generators()[g].reserve_cost * (sol.r_up[g] + sol.r_dn[g]);
  }
  out.energy -= ce_beta * mean_at_caps.sum();
  out.total = out.energy + out.reserve;
  out.total_up_mw = sol.r_up.sum();
  out.total_dn_mw = sol.r_dn.sum();
  return out;
}

std::string ViolationReport::to_json() const {
  json j;
  j["format"] = "windsched-validation";
  j["n"] = n;
  j["scenario_source"] = scenario_source;
  j["seed_collision_warning"] = seed_collision_warning;
  auto vec = [](const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
  };
  j["line_upper_freq"] = vec(line_upper_freq);
  j["line_lower_freq"] = vec(line_lower_freq);
  j["gen_up_freq"] = vec(gen_up_freq);
  j["gen_dn_freq"] = vec(gen_dn_freq);
  j["max_line_violation"] = max_line_violation;
  j["max_gen_violation"] = max_gen_violation;
  return j.dump(1) + "\n";
}

void ViolationReport::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write validation report: " + path);
  out << to_json();
}

void ViolationReport::save_traces_csv(const std::string& path) const {
  if (trace_names.empty())
    throw std::runtime_error("no traces were requested");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write traces: " + path);
  out << "scenario";
  for (const auto& name : trace_names) out << "," << name;
  out << "\n";
  out.precision(10);
  for (int i = 0; i < traces.rows(); ++i) {
    out << (i + 1);
    for (int c = 0; c < traces.cols(); ++c) out << "," << traces(i, c);
    out << "\n";
  }
}

}  // namespace windsched
