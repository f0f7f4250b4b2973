#include "windsched/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace windsched {

using nlohmann::json;

namespace {

std::vector<ConstraintId> constraint_order(int n_lines, int n_gens) {
  std::vector<ConstraintId> ids;
  ids.reserve(2 * n_lines + 2 * n_gens);
  for (int l = 0; l < n_lines; ++l)
    ids.push_back({ConstraintId::Kind::LineUpper, l});
  for (int l = 0; l < n_lines; ++l)
    ids.push_back({ConstraintId::Kind::LineLower, l});
  for (int g = 0; g < n_gens; ++g) ids.push_back({ConstraintId::Kind::GenUp, g});
  for (int g = 0; g < n_gens; ++g)
    ids.push_back({ConstraintId::Kind::GenDown, g});
  return ids;
}

Eigen::VectorXd base_flows(const GridCase& grid, const PtdfMatrix& ptdf) {
  Eigen::VectorXd inj = Eigen::VectorXd::Zero(grid.num_buses());
  for (const auto& b : grid.buses()) inj[grid.bus_index(b.id)] -= b.demand_mw;
  for (const auto& w : grid.wind_farms())
    inj[grid.bus_index(w.bus)] += w.forecast_mw;
  return ptdf.factors * inj;
}

void add_common_dispatch(const GridCase& grid, ScheduleProblem& sp) {
  auto& prog = sp.prog;
  const int ng = grid.num_generators();
  sp.map.n_gens = ng;
  sp.map.n_lines = grid.num_lines();
  sp.map.n_farms = grid.num_wind_farms();
  sp.map.p_sc0 = prog.num_vars();
  for (int g = 0; g < ng; ++g)
    prog.add_var("p_sc[" + std::to_string(g) + "]", grid.generators()[g].p_min_mw,
                 grid.generators()[g].p_max_mw);
  sp.map.r_up0 = prog.num_vars();
  for (int g = 0; g < ng; ++g)
    prog.add_var("r_up[" + std::to_string(g) + "]", 0.0, kInf);
  sp.map.r_dn0 = prog.num_vars();
  for (int g = 0; g < ng; ++g)
    prog.add_var("r_dn[" + std::to_string(g) + "]", 0.0, kInf);

  for (int g = 0; g < ng; ++g) {
    prog.add_objective(sp.map.p_sc(g), grid.generators()[g].energy_cost);
    prog.add_objective(sp.map.r_up(g), grid.generators()[g].reserve_cost);
    prog.add_objective(sp.map.r_dn(g), grid.generators()[g].reserve_cost);
  }

  // forecast-point power balance
  LinExpr balance;
  for (int g = 0; g < ng; ++g) balance.push_back({sp.map.p_sc(g), 1.0});
  prog.add_eq(std::move(balance),
              grid.total_demand() - grid.total_wind_forecast(), "balance");

  // headroom boxes around the schedule
  for (int g = 0; g < ng; ++g) {
    prog.add_ineq({{sp.map.p_sc(g), 1.0}, {sp.map.r_up(g), 1.0}},
                  grid.generators()[g].p_max_mw,
                  "headroom_up:" + std::to_string(g));
    prog.add_ineq({{sp.map.p_sc(g), -1.0}, {sp.map.r_dn(g), 1.0}},
                  -grid.generators()[g].p_min_mw,
                  "headroom_dn:" + std::to_string(g));
  }
}

}  // namespace

ScheduleProblem build_fixed_margins(const GridCase& grid,
                                    const PtdfMatrix& ptdf,
                                    const Sensitivities& sens,
                                    const Eigen::VectorXd& mean,
                                    const Eigen::VectorXd& stddev,
                                    const Eigen::VectorXd& kappa,
                                    double epsilon, double gamma0,
                                    const std::string& method) {
  const int nl = grid.num_lines();
  const int ng = grid.num_generators();
  if (mean.size() != grid.num_wind_farms() || stddev.size() != mean.size())
    throw std::invalid_argument(method + ": moment vector size mismatch");
  if (stddev.size() > 0 && stddev.minCoeff() < 0)
    throw std::invalid_argument(method + ": negative standard deviation");

  ScheduleProblem sp;
  sp.method = method;
  sp.epsilon = epsilon;
  sp.gamma0 = gamma0;
  sp.base_flow = base_flows(grid, ptdf);
  add_common_dispatch(grid, sp);
  auto& prog = sp.prog;

  const double mu_sum = mean.sum();
  const double sig_norm = stddev.norm();
  sp.const_margin.resize(2 * nl + 2 * ng);
  sp.const_kappa = kappa;
  sp.moments_mean = mean;
  sp.moments_std = stddev;

  for (int l = 0; l < nl; ++l) {
    const Eigen::VectorXd k_row = sens.wind_to_flow.row(l);
    const double k_mu = k_row.dot(mean);
    const double k_sig = (k_row.array() * stddev.array()).matrix().norm();
    const double m_up = k_mu + gamma0 * k_sig + kappa[l];
    const double m_dn = -k_mu + gamma0 * k_sig + kappa[nl + l];
    sp.const_margin[l] = m_up;
    sp.const_margin[nl + l] = m_dn;
    LinExpr up, dn;
    for (int g = 0; g < ng; ++g) {
      const double c = ptdf.factors(l, grid.bus_index(grid.generators()[g].bus));
      if (c != 0.0) {
        up.push_back({sp.map.p_sc(g), c});
        dn.push_back({sp.map.p_sc(g), -c});
      }
    }
    const double limit = grid.lines()[l].limit_mw;
    prog.add_ineq(std::move(up), limit - sp.base_flow[l] - m_up,
                  "flow_up:" + std::to_string(l));
    prog.add_ineq(std::move(dn), limit + sp.base_flow[l] - m_dn,
                  "flow_dn:" + std::to_string(l));
  }
  for (int g = 0; g < ng; ++g) {
    const double beta = sens.beta[g];
    const double m_up = -beta * mu_sum + gamma0 * beta * sig_norm + kappa[2 * nl + g];
    const double m_dn = beta * mu_sum + gamma0 * beta * sig_norm + kappa[2 * nl + ng + g];
    sp.const_margin[2 * nl + g] = m_up;
    sp.const_margin[2 * nl + ng + g] = m_dn;
    prog.add_ineq({{sp.map.r_up(g), -1.0}}, -m_up, "reserve_up:" + std::to_string(g));
    prog.add_ineq({{sp.map.r_dn(g), -1.0}}, -m_dn, "reserve_dn:" + std::to_string(g));
  }

  // expected-deviation share of the energy cost enters as a constant
  double ce_beta = 0.0;
  for (int g = 0; g < ng; ++g)
    ce_beta += grid.generators()[g].energy_cost * sens.beta[g];
  prog.add_objective_constant(-ce_beta * mu_sum);
  return sp;
}

ScheduleProblem build_m1(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens, const FixedMoments& moments,
                         double epsilon, double gamma0,
                         const Eigen::VectorXd& fixed_caps) {
  ScheduleProblem sp = build_fixed_margins(
      grid, ptdf, sens, moments.mean, moments.stddev,
      Eigen::VectorXd::Zero(2 * grid.num_lines() + 2 * grid.num_generators()),
      epsilon, gamma0, "m1");
  sp.fixed_caps = fixed_caps.size() == grid.num_wind_farms()
                      ? fixed_caps
                      : Eigen::VectorXd::Constant(grid.num_wind_farms(), kInf);
  return sp;
}

ScheduleProblem build_m0(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens,
                         const SurrogateBundle& bundle, double epsilon,
                         CapPolicy policy) {
  const int nl = grid.num_lines();
  const int ng = grid.num_generators();
  const int nf = grid.num_wind_farms();
  if (static_cast<int>(bundle.farms.size()) != nf)
    throw std::invalid_argument("build_m0: bundle/case farm mismatch");
  if (static_cast<int>(bundle.constraint_ids.size()) != 2 * nl + 2 * ng)
    throw std::invalid_argument("build_m0: bundle does not cover all constraints");

  ScheduleProblem sp;
  sp.method = "m0";
  sp.epsilon = epsilon;
  sp.gamma0 = bundle.gamma0;
  sp.base_flow = base_flows(grid, ptdf);
  add_common_dispatch(grid, sp);
  auto& prog = sp.prog;
  auto& map = sp.map;
  map.segments = bundle.farms.empty()
                     ? 0
                     : bundle.farms[0].mean_pwl.num_segments();

  // curtailment caps and their PWL encodings
  map.wc0 = prog.num_vars();
  for (int f = 0; f < nf; ++f) {
    const auto& farm = grid.wind_farms()[f];
    const double lo = policy == CapPolicy::FixedAtCapacity ? farm.capacity_mw
                                                           : farm.forecast_mw;
    prog.add_var("wc[" + std::to_string(f) + "]", lo, farm.capacity_mw);
  }
  map.lam_flow0 = prog.num_vars();
  for (int l = 0; l < nl; ++l)
    prog.add_var("lam_flow[" + std::to_string(l) + "]", 0.0, kInf);
  map.lam_gen0 = prog.num_vars();
  for (int g = 0; g < ng; ++g)
    prog.add_var("lam_gen[" + std::to_string(g) + "]", 0.0, kInf);

  map.weights0 = prog.num_vars();
  for (int f = 0; f < nf; ++f) {
    const int s_count = bundle.farms[f].mean_pwl.num_segments();
    if (s_count != map.segments)
      throw std::invalid_argument("build_m0: farms disagree on pwl segments");
    for (int s = 0; s <= s_count; ++s)
      prog.add_var("w[" + std::to_string(f) + "," + std::to_string(s) + "]", 0.0,
                   1.0);
  }
  map.binaries0 = prog.num_vars();
  for (int f = 0; f < nf; ++f)
    for (int t = 0; t < map.segments; ++t) {
      const int v = prog.add_var(
          "z[" + std::to_string(f) + "," + std::to_string(t) + "]", 0.0, 1.0);
      prog.set_binary(v);
    }

  // tie caps to weights; one active segment per farm
  for (int f = 0; f < nf; ++f) {
    const auto& bp = bundle.farms[f].mean_pwl.breakpoints();
    LinExpr tie{{map.wc(f), 1.0}};
    for (int s = 0; s <= map.segments; ++s)
      tie.push_back({map.weight(f, s), -bp[s]});
    prog.add_eq(std::move(tie), 0.0, "cap_tie:" + std::to_string(f));

    LinExpr wsum;
    for (int s = 0; s <= map.segments; ++s) wsum.push_back({map.weight(f, s), 1.0});
    prog.add_eq(std::move(wsum), 1.0, "weights_sum:" + std::to_string(f));

    LinExpr zsum;
    for (int t = 0; t < map.segments; ++t) zsum.push_back({map.binary(f, t), 1.0});
    prog.add_eq(std::move(zsum), 1.0, "segment_sum:" + std::to_string(f));

    for (int s = 0; s <= map.segments; ++s) {
      LinExpr adj{{map.weight(f, s), 1.0}};
      if (s > 0) adj.push_back({map.binary(f, s - 1), -1.0});
      if (s < map.segments) adj.push_back({map.binary(f, s), -1.0});
      prog.add_ineq(std::move(adj), 0.0,
                    "adjacency:" + std::to_string(f) + "," + std::to_string(s));
    }
  }

  // chance-constraint rows
  const auto mu_val = [&](int f, int s) {
    return bundle.farms[f].mean_pwl.values()[s];
  };
  const auto sig_val = [&](int f, int s) {
    return bundle.farms[f].std_pwl.values()[s];
  };
  const double gamma0 = bundle.gamma0;

  for (int l = 0; l < nl; ++l) {
    const int up_idx = l, dn_idx = nl + l;
    LinExpr up, dn;
    for (int g = 0; g < ng; ++g) {
      const double c = ptdf.factors(l, grid.bus_index(grid.generators()[g].bus));
      if (c != 0.0) {
        up.push_back({map.p_sc(g), c});
        dn.push_back({map.p_sc(g), -c});
      }
    }
    for (int f = 0; f < nf; ++f) {
      const double k = sens.wind_to_flow(l, f);
      for (int s = 0; s <= map.segments; ++s) {
        up.push_back({map.weight(f, s), k * mu_val(f, s)});
        dn.push_back({map.weight(f, s), -k * mu_val(f, s)});
      }
      up.push_back({map.wc(f), bundle.kappa_coeffs(up_idx, f)});
      dn.push_back({map.wc(f), bundle.kappa_coeffs(dn_idx, f)});
    }
    up.push_back({map.lam_flow(l), gamma0});
    dn.push_back({map.lam_flow(l), gamma0});
    const double limit = grid.lines()[l].limit_mw;
    prog.add_ineq(std::move(up), limit - sp.base_flow[l],
                  "flow_up:" + std::to_string(l));
    prog.add_ineq(std::move(dn), limit + sp.base_flow[l],
                  "flow_dn:" + std::to_string(l));

    SocConstraint cone;
    cone.name = "flow_std:" + std::to_string(l);
    for (int f = 0; f < nf; ++f) {
      const double k = sens.wind_to_flow(l, f);
      LinExpr row;
      for (int s = 0; s <= map.segments; ++s)
        row.push_back({map.weight(f, s), k * sig_val(f, s)});
      cone.norm_rows.push_back(std::move(row));
      cone.norm_consts.push_back(0.0);
    }
    cone.rhs_expr = {{map.lam_flow(l), 1.0}};
    prog.add_soc(std::move(cone));
  }

  for (int g = 0; g < ng; ++g) {
    const double beta = sens.beta[g];
    const int up_idx = 2 * nl + g, dn_idx = 2 * nl + ng + g;
    LinExpr up{{map.r_up(g), -1.0}}, dn{{map.r_dn(g), -1.0}};
    for (int f = 0; f < nf; ++f) {
      for (int s = 0; s <= map.segments; ++s) {
        up.push_back({map.weight(f, s), -beta * mu_val(f, s)});
        dn.push_back({map.weight(f, s), beta * mu_val(f, s)});
      }
      up.push_back({map.wc(f), bundle.kappa_coeffs(up_idx, f)});
      dn.push_back({map.wc(f), bundle.kappa_coeffs(dn_idx, f)});
    }
    up.push_back({map.lam_gen(g), gamma0});
    dn.push_back({map.lam_gen(g), gamma0});
    prog.add_ineq(std::move(up), 0.0, "reserve_up:" + std::to_string(g));
    prog.add_ineq(std::move(dn), 0.0, "reserve_dn:" + std::to_string(g));

    SocConstraint cone;
    cone.name = "gen_std:" + std::to_string(g);
    for (int f = 0; f < nf; ++f) {
      LinExpr row;
      for (int s = 0; s <= map.segments; ++s)
        row.push_back({map.weight(f, s), beta * sig_val(f, s)});
      cone.norm_rows.push_back(std::move(row));
      cone.norm_consts.push_back(0.0);
    }
    cone.rhs_expr = {{map.lam_gen(g), 1.0}};
    prog.add_soc(std::move(cone));
  }

  // expected-deviation share of the energy cost, linear in the weights
  double ce_beta = 0.0;
  for (int g = 0; g < ng; ++g)
    ce_beta += grid.generators()[g].energy_cost * sens.beta[g];
  for (int f = 0; f < nf; ++f)
    for (int s = 0; s <= map.segments; ++s)
      prog.add_objective(map.weight(f, s), -ce_beta * mu_val(f, s));

  sp.pwl_mean.resize(nf, map.segments + 1);
  sp.pwl_std.resize(nf, map.segments + 1);
  for (int f = 0; f < nf; ++f)
    for (int s = 0; s <= map.segments; ++s) {
      sp.pwl_mean(f, s) = mu_val(f, s);
      sp.pwl_std(f, s) = sig_val(f, s);
    }
  sp.kappa_coeffs = bundle.kappa_coeffs;
  return sp;
}

DispatchSolution extract_solution(const ScheduleProblem& sp,
                                  const GridCase& grid,
                                  const Sensitivities& sens,
                                  const Solution& sol) {
  if (sol.x.size() != sp.prog.num_vars())
    throw std::invalid_argument("extract_solution: solution/problem mismatch");
  const int ng = grid.num_generators();
  const int nl = grid.num_lines();
  const int nf = grid.num_wind_farms();
  const auto& map = sp.map;

  DispatchSolution out;
  out.method = sp.method == "m1" ? "m1" : "m0";
  out.stage = sp.method == "m0"
                  ? "misocp"
                  : (sp.method == "correction" ? "corrected" : "fixed-moments");
  out.solver = sol;
  out.p_sc.resize(ng);
  out.r_up.resize(ng);
  out.r_dn.resize(ng);
  for (int g = 0; g < ng; ++g) {
    out.p_sc[g] = sol.x[map.p_sc(g)];
    out.r_up[g] = sol.x[map.r_up(g)];
    out.r_dn[g] = sol.x[map.r_dn(g)];
  }

  out.caps.resize(nf);
  out.mean_at_caps.resize(nf);
  out.std_at_caps.resize(nf);
  out.margins.clear();
  const auto ids = constraint_order(nl, ng);

  if (sp.method == "m0") {
    for (int f = 0; f < nf; ++f) out.caps[f] = sol.x[map.wc(f)];
    // moment values exactly as the optimizer saw them, through the weights
    for (int f = 0; f < nf; ++f) {
      double mu = 0, sg = 0;
      for (int s = 0; s <= map.segments; ++s) {
        const double w = sol.x[map.weight(f, s)];
        mu += w * sp.mu_values(f, s);
        sg += w * sp.sig_values(f, s);
      }
      out.mean_at_caps[f] = mu;
      out.std_at_caps[f] = sg;
    }
    out.flow_std.resize(nl);
    for (int l = 0; l < nl; ++l) out.flow_std[l] = sol.x[map.lam_flow(l)];
    out.gen_std.resize(ng);
    for (int g = 0; g < ng; ++g) out.gen_std[g] = sol.x[map.lam_gen(g)];
  } else {
    out.caps = sp.fixed_caps;
    out.mean_at_caps = sp.moments_mean;
    out.std_at_caps = sp.moments_std;
    out.flow_std.resize(nl);
    for (int l = 0; l < nl; ++l)
      out.flow_std[l] = (sens.wind_to_flow.row(l).transpose().array() *
                         sp.moments_std.array())
                            .matrix()
                            .norm();
    out.gen_std = sens.beta * sp.moments_std.norm();
  }

  // margin breakdowns per chance constraint
  const double mu_sum = out.mean_at_caps.sum();
  const double sig_norm = out.std_at_caps.norm();
  for (size_t i = 0; i < ids.size(); ++i) {
    MarginBreakdown mb;
    mb.id = ids[i];
    double rough = 0, comp = 0;
    const int idx = static_cast<int>(i);
    if (sp.method == "m0") {
      comp = sp.kappa_coeffs_row(idx).dot(out.caps);
    } else {
      comp = sp.const_kappa.size() ? sp.const_kappa[idx] : 0.0;
    }
    switch (mb.id.kind) {
      case ConstraintId::Kind::LineUpper: {
        const Eigen::VectorXd k_row = sens.wind_to_flow.row(mb.id.index);
        rough = k_row.dot(out.mean_at_caps) +
                sp.gamma0 * (k_row.array() * out.std_at_caps.array()).matrix().norm();
        break;
      }
      case ConstraintId::Kind::LineLower: {
        const Eigen::VectorXd k_row = sens.wind_to_flow.row(mb.id.index);
        rough = -k_row.dot(out.mean_at_caps) +
                sp.gamma0 * (k_row.array() * out.std_at_caps.array()).matrix().norm();
        break;
      }
      case ConstraintId::Kind::GenUp:
        rough = sens.beta[mb.id.index] * (-mu_sum + sp.gamma0 * sig_norm);
        break;
      case ConstraintId::Kind::GenDown:
        rough = sens.beta[mb.id.index] * (mu_sum + sp.gamma0 * sig_norm);
        break;
    }
    mb.rough = rough;
    mb.compensation = comp;
    mb.total = rough + comp;
    out.margins.push_back(mb);
  }

  // objective split per the expected-cost form
  double ce_beta = 0.0;
  for (int g = 0; g < ng; ++g)
    ce_beta += grid.generators()[g].energy_cost * sens.beta[g];
  out.energy_cost = 0.0;
  out.reserve_cost = 0.0;
  for (int g = 0; g < ng; ++g) {
    out.energy_cost += grid.generators()[g].energy_cost * out.p_sc[g];
    out.reserve_cost +=
        grid.generators()[g].reserve_cost * (out.r_up[g] + out.r_dn[g]);
  }
  out.energy_cost -= ce_beta * mu_sum;
  out.objective = sol.objective;
  return out;
}

CorrectionMode correction_mode_from_string(const std::string& s) {
  if (s == "empirical") return CorrectionMode::Empirical;
  if (s == "se-gp") return CorrectionMode::SeGp;
  if (s == "surrogate") return CorrectionMode::Surrogate;
  throw std::invalid_argument("correction mode must be empirical, se-gp or surrogate");
}

std::string to_string(CorrectionMode m) {
  switch (m) {
    case CorrectionMode::Empirical: return "empirical";
    case CorrectionMode::SeGp: return "se-gp";
    case CorrectionMode::Surrogate: return "surrogate";
  }
  return "?";
}

PipelineResult solve_schedule(const GridCase& grid, const ScenarioSet& set,
                              const PipelineConfig& config) {
  const PtdfMatrix ptdf = compute_ptdf(grid);
  const Sensitivities sens = compute_sensitivities(grid, ptdf);

  PipelineResult out;
  out.bundle = build_bundle(grid, sens, set, config.surrogate);

  ScheduleProblem sp = build_m0(grid, ptdf, sens, out.bundle,
                                config.surrogate.epsilon, config.caps);
  Solution sol = solve_misocp(sp.prog, config.misocp);
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::NodeLimit)
    throw std::runtime_error("schedule stage failed: " + to_string(sol.status) +
                             (sol.message.empty() ? "" : " (" + sol.message + ")"));
  out.misocp_stage = extract_solution(sp, grid, sens, sol);
  out.corrected = correct(grid, ptdf, sens, set, out.bundle, out.misocp_stage,
                          config.surrogate.epsilon, config.correction,
                          config.misocp.relaxation);
  return out;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i]))
      a.push_back(nullptr);
    else
      a.push_back(v[i]);
  }
  return a;
}

Eigen::VectorXd vec_parse(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    v[static_cast<int>(i)] = a[i].is_null() ? kInf : a[i].get<double>();
  return v;
}

}  // namespace

std::string DispatchSolution::to_json() const {
  json j;
  j["format"] = "windsched-dispatch";
  j["method"] = method;
  j["stage"] = stage;
  j["objective"] = objective;
  j["energy_cost"] = energy_cost;
  j["reserve_cost"] = reserve_cost;
  j["p_sc"] = vec_json(p_sc);
  j["r_up"] = vec_json(r_up);
  j["r_dn"] = vec_json(r_dn);
  j["caps"] = vec_json(caps);
  j["mean_at_caps"] = vec_json(mean_at_caps);
  j["std_at_caps"] = vec_json(std_at_caps);
  j["flow_std"] = vec_json(flow_std);
  j["gen_std"] = vec_json(gen_std);
  json ms = json::array();
  for (const auto& m : margins)
    ms.push_back({{"constraint", m.id.str()},
                  {"rough", m.rough},
                  {"compensation", m.compensation},
                  {"total", m.total}});
  j["margins"] = ms;
  j["solver"] = {{"status", windsched::to_string(solver.status)},
                 {"iterations", solver.iterations},
                 {"nodes", solver.nodes},
                 {"gap", solver.gap}};
  return j.dump(1) + "\n";
}

DispatchSolution DispatchSolution::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "windsched-dispatch")
    throw std::invalid_argument("not a dispatch results file");
  DispatchSolution d;
  d.method = j.at("method").get<std::string>();
  d.stage = j.at("stage").get<std::string>();
  d.objective = j.at("objective").get<double>();
  d.energy_cost = j.at("energy_cost").get<double>();
  d.reserve_cost = j.at("reserve_cost").get<double>();
  d.p_sc = vec_parse(j.at("p_sc"));
  d.r_up = vec_parse(j.at("r_up"));
  d.r_dn = vec_parse(j.at("r_dn"));
  d.caps = vec_parse(j.at("caps"));
  d.mean_at_caps = vec_parse(j.at("mean_at_caps"));
  d.std_at_caps = vec_parse(j.at("std_at_caps"));
  d.flow_std = vec_parse(j.at("flow_std"));
  d.gen_std = vec_parse(j.at("gen_std"));
  for (const auto& mj : j.at("margins")) {
    MarginBreakdown m;
    const std::string s = mj.at("constraint").get<std::string>();
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    m.id.index = std::stoi(s.substr(colon + 1));
    if (kind == "line_upper") m.id.kind = ConstraintId::Kind::LineUpper;
    else if (kind == "line_lower") m.id.kind = ConstraintId::Kind::LineLower;
    else if (kind == "gen_up") m.id.kind = ConstraintId::Kind::GenUp;
    else m.id.kind = ConstraintId::Kind::GenDown;
    m.rough = mj.at("rough").get<double>();
    m.compensation = mj.at("compensation").get<double>();
    m.total = mj.at("total").get<double>();
    d.margins.push_back(m);
  }
  const auto& sj = j.at("solver");
  const std::string st = sj.at("status").get<std::string>();
  if (st == "optimal") d.solver.status = SolveStatus::Optimal;
  else if (st == "infeasible") d.solver.status = SolveStatus::Infeasible;
  else if (st == "unbounded") d.solver.status = SolveStatus::Unbounded;
  else if (st == "iteration-limit") d.solver.status = SolveStatus::IterationLimit;
  else if (st == "node-limit") d.solver.status = SolveStatus::NodeLimit;
  else d.solver.status = SolveStatus::NumericalFailure;
  d.solver.iterations = sj.at("iterations").get<int>();
  d.solver.nodes = sj.at("nodes").get<long>();
  d.solver.gap = sj.at("gap").get<double>();
  d.solver.objective = d.objective;
  return d;
}

void DispatchSolution::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results: " + path);
  out << to_json();
}

DispatchSolution DispatchSolution::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read results: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace windsched
