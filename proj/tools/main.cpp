#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "windsched/branch_bound.hpp"
#include "windsched/matpower.hpp"
#include "windsched/model.hpp"
#include "windsched/runconfig.hpp"
#include "windsched/validate.hpp"

namespace ws = windsched;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitInput = 2;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void print_summary_table(const std::string& title, const ws::CostBreakdown& cost) {
  std::cout << "== " << title << " ==\n";
  std::cout << "Total operational cost ($)        " << fmt4(cost.total) << "\n";
  std::cout << "Energy cost ($)                   " << fmt4(cost.energy) << "\n";
  std::cout << "Reserve cost ($)                  " << fmt4(cost.reserve) << "\n";
  std::cout << "Total up reserve capacity (MW)    " << fmt4(cost.total_up_mw) << "\n";
  std::cout << "Total down reserve capacity (MW)  " << fmt4(cost.total_dn_mw) << "\n";
}

ws::ScenarioSet training_set(const ws::RunConfig& cfg, const ws::GridCase& grid) {
  if (!cfg.scenario_csv.empty()) return ws::ScenarioSet::from_csv(cfg.scenario_csv);
  const int nf = grid.num_wind_farms();
  return ws::ScenarioSet::gaussian(
      cfg.n_train, Eigen::VectorXd::Constant(nf, cfg.wind_mean),
      cfg.stds_for(nf), cfg.seed);
}

ws::FixedMoments parametric_moments(const ws::RunConfig& cfg,
                                    const ws::GridCase& grid,
                                    const ws::ScenarioSet* csv_set) {
  ws::FixedMoments m;
  const int nf = grid.num_wind_farms();
  if (csv_set) {
    const auto stats = ws::truncated_stats(
        *csv_set, Eigen::VectorXd::Constant(nf, ws::kInf), grid.wind_forecasts());
    m.mean = stats.mean;
    m.stddev = stats.stddev;
  } else {
    m.mean = Eigen::VectorXd::Constant(nf, cfg.wind_mean);
    m.stddev = cfg.stds_for(nf);
  }
  return m;
}

ws::SurrogateConfig surrogate_config(const ws::RunConfig& cfg) {
  ws::SurrogateConfig sc;
  sc.epsilon = cfg.epsilon;
  sc.gamma_rule = ws::gamma_rule_from_string(cfg.gamma_rule);
  sc.pwl_segments = cfg.pwl_segments;
  sc.lhs_extra = cfg.lhs_extra;
  sc.wc0 = cfg.wc0;
  sc.t_wc = cfg.t_wc;
  sc.gp.jitter_start_scale = cfg.gp_jitter;
  return sc;
}

ws::TraceRequest parse_traces(const std::string& spec) {
  ws::TraceRequest out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("traces: expected line=<id> or gen=<id>");
    const std::string key = item.substr(0, eq);
    const int id = std::stoi(item.substr(eq + 1));
    if (key == "line")
      out.lines.push_back(id);
    else if (key == "gen")
      out.gens.push_back(id);
    else
      throw std::invalid_argument("traces: unknown key '" + key + "'");
  }
  return out;
}

int cmd_inspect(const std::string& case_path, const std::string& ptdf_csv) {
  const ws::GridCase grid = ws::load_case(case_path);
  std::cout << grid.num_buses() << " buses, " << grid.num_lines() << " lines, "
            << grid.num_generators() << " generators, " << grid.num_wind_farms()
            << (grid.num_wind_farms() == 1 ? " wind farm" : " wind farms")
            << "\n";
  std::cout << "slack bus: " << grid.slack_bus() << ", base "
            << grid.base_mva() << " MVA, total demand "
            << fmt4(grid.total_demand()) << " MW\n";
  std::cout << "generators (bus, p_min, p_max, energy $/MWh, reserve $/MW):\n";
  for (const auto& g : grid.generators())
    std::cout << "  g" << g.id << " @" << g.bus << "  " << fmt4(g.p_min_mw)
              << " .. " << fmt4(g.p_max_mw) << "  " << fmt4(g.energy_cost)
              << "  " << fmt4(g.reserve_cost) << "\n";
  std::cout << "wind farms (bus, forecast MW, capacity MW):\n";
  for (const auto& w : grid.wind_farms())
    std::cout << "  w" << w.id << " @" << w.bus << "  " << fmt4(w.forecast_mw)
              << "  " << fmt4(w.capacity_mw) << "\n";
  std::cout << "lines (from, to, x p.u., limit MW):\n";
  for (const auto& l : grid.lines())
    std::cout << "  l" << l.id << "  " << l.from_bus << " -> " << l.to_bus
              << "  " << l.reactance_pu << "  " << fmt4(l.limit_mw) << "\n";

  if (!ptdf_csv.empty()) {
    const ws::PtdfMatrix ptdf = ws::compute_ptdf(grid);
    std::ofstream out(ptdf_csv);
    if (!out) throw std::runtime_error("cannot write " + ptdf_csv);
    out << "line";
    for (const auto& b : grid.buses()) out << ",bus_" << b.id;
    out << "\n";
    out.precision(12);
    for (int l = 0; l < grid.num_lines(); ++l) {
      out << grid.lines()[l].id;
      for (int b = 0; b < grid.num_buses(); ++b) out << "," << ptdf.factors(l, b);
      out << "\n";
    }
    std::cout << "ptdf written to " << ptdf_csv << "\n";
  }
  return kExitOk;
}

int cmd_train(const ws::RunConfig& cfg) {
  Timer timer;
  const ws::GridCase grid = ws::load_case(cfg.case_path);
  cfg.validate(grid.num_wind_farms());
  const ws::ScenarioSet set = training_set(cfg, grid);
  const ws::PtdfMatrix ptdf = ws::compute_ptdf(grid);
  const ws::Sensitivities sens = ws::compute_sensitivities(grid, ptdf);
  const ws::SurrogateBundle bundle =
      ws::build_bundle(grid, sens, set, surrogate_config(cfg));

  fs::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/bundle.json";
  bundle.save(path);

  double max_resid = 0.0;
  for (int p = 0; p < bundle.kappa_inputs.rows(); ++p)
    for (int c = 0; c < bundle.kappa_targets.cols(); ++c)
      max_resid = std::max(max_resid,
                           std::abs(bundle.kappa_rough(p, c) +
                                    bundle.kappa_targets(p, c) -
                                    bundle.kappa_margins(p, c)));

  std::cout << "trained " << bundle.farms.size() << " moment surrogate pair(s), "
            << bundle.constraint_ids.size() << " compensation entries\n";
  std::cout << "grid: " << bundle.diag_points << " enumeration points + "
            << bundle.lhs_extra << " hypercube points, " << bundle.n_scenarios
            << " scenarios\n";
  for (const auto& f : bundle.farms)
    std::cout << "farm " << f.farm << ": mean gp (amp " << fmt4(f.mean_gp.amplitude)
              << ", len " << fmt4(f.mean_gp.length) << ", pwl err "
              << fmt4(f.mean_pwl.max_error()) << "), std gp (amp "
              << fmt4(f.std_gp.amplitude) << ", len " << fmt4(f.std_gp.length)
              << ", pwl err " << fmt4(f.std_pwl.max_error()) << ")\n";
  std::cout << "max two-stage identity residual: " << max_resid << "\n";
  std::cout << "bundle written to " << path << "\n";
  ws::write_manifest(cfg, "train", cfg.out_dir, timer.seconds());
  return kExitOk;
}

int cmd_schedule(ws::RunConfig& cfg, const std::string& method,
                 const std::string& bundle_path, const std::string& caps_from) {
  Timer timer;
  const ws::GridCase grid = ws::load_case(cfg.case_path);
  cfg.validate(grid.num_wind_farms());
  const ws::PtdfMatrix ptdf = ws::compute_ptdf(grid);
  const ws::Sensitivities sens = ws::compute_sensitivities(grid, ptdf);
  const double gamma0 = ws::gamma_multiplier(
      ws::gamma_rule_from_string(cfg.gamma_rule), cfg.epsilon);
  fs::create_directories(cfg.out_dir);

  ws::SolveOptions sopts;
  sopts.tol = cfg.solver_tol;
  sopts.feastol = cfg.solver_tol;

  if (method == "m1") {
    ws::ScheduleProblem sp;
    if (!caps_from.empty()) {
      // caps pinned from an earlier run; moments become truncated statistics
      const ws::DispatchSolution ref = ws::DispatchSolution::load(caps_from);
      const ws::ScenarioSet set = training_set(cfg, grid);
      const auto stats = ws::truncated_stats(set, ref.caps, grid.wind_forecasts());
      ws::FixedMoments moments{stats.mean, stats.stddev};
      sp = ws::build_m1(grid, ptdf, sens, moments, cfg.epsilon, gamma0, ref.caps);
    } else {
      std::unique_ptr<ws::ScenarioSet> csv;
      if (!cfg.scenario_csv.empty())
        csv = std::make_unique<ws::ScenarioSet>(
            ws::ScenarioSet::from_csv(cfg.scenario_csv));
      const ws::FixedMoments moments = parametric_moments(cfg, grid, csv.get());
      sp = ws::build_m1(grid, ptdf, sens, moments, cfg.epsilon, gamma0);
    }
    if (!cfg.dump_program.empty()) {
      std::ofstream dump(cfg.dump_program);
      sp.prog.dump(dump);
    }
    const ws::Solution sol = ws::solve_convex(sp.prog, sopts);
    if (sol.status != ws::SolveStatus::Optimal) {
      std::cerr << "error: m1 solve " << ws::to_string(sol.status) << "\n";
      return kExitSolver;
    }
    const ws::DispatchSolution d = ws::extract_solution(sp, grid, sens, sol);
    d.save(cfg.out_dir + "/schedule_m1.json");
    print_summary_table("M1 (traditional reformulation)",
                        ws::cost_report(d, grid, sens, d.mean_at_caps));
    std::cout << "solver: " << ws::to_string(sol.status) << ", "
              << sol.iterations << " iterations, " << fmt4(timer.seconds())
              << " s\n";
    ws::write_manifest(cfg, "schedule_m1", cfg.out_dir, timer.seconds());
    return kExitOk;
  }
  if (method != "m0") {
    std::cerr << "error: method must be m0 or m1\n";
    return kExitInput;
  }

  const ws::ScenarioSet set = training_set(cfg, grid);
  ws::SurrogateBundle bundle;
  const std::string bp = bundle_path.empty() ? cfg.out_dir + "/bundle.json"
                                             : bundle_path;
  if (fs::exists(bp)) {
    bundle = ws::SurrogateBundle::load(bp);
  } else {
    bundle = ws::build_bundle(grid, sens, set, surrogate_config(cfg));
    bundle.save(bp);
  }

  const ws::CapPolicy policy = cfg.fix_caps == "max"
                                   ? ws::CapPolicy::FixedAtCapacity
                                   : ws::CapPolicy::Free;
  ws::ScheduleProblem sp = ws::build_m0(grid, ptdf, sens, bundle, cfg.epsilon, policy);
  if (!cfg.dump_program.empty()) {
    std::ofstream dump(cfg.dump_program);
    sp.prog.dump(dump);
  }
  ws::MisocpOptions mopts;
  mopts.relaxation = sopts;
  mopts.gap = cfg.mip_gap;
  mopts.node_limit = cfg.node_limit;
  const ws::Solution sol = ws::solve_misocp(sp.prog, mopts);
  if (sol.status != ws::SolveStatus::Optimal &&
      sol.status != ws::SolveStatus::NodeLimit) {
    std::cerr << "error: m0 solve " << ws::to_string(sol.status) << "\n";
    return kExitSolver;
  }
  const ws::DispatchSolution first = ws::extract_solution(sp, grid, sens, sol);
  first.save(cfg.out_dir + "/schedule_m0_misocp.json");

  const ws::DispatchSolution corrected =
      ws::correct(grid, ptdf, sens, set, bundle, first, cfg.epsilon,
                  ws::correction_mode_from_string(cfg.correction), sopts);
  corrected.save(cfg.out_dir + "/schedule_m0.json");

  print_summary_table("M0 (data-driven, corrected)",
                      ws::cost_report(corrected, grid, sens, corrected.mean_at_caps));
  std::cout << "caps (MW):";
  for (int f = 0; f < corrected.caps.size(); ++f)
    std::cout << " " << fmt4(corrected.caps[f]);
  std::cout << "\nsolver: " << ws::to_string(sol.status) << ", " << sol.nodes
            << " nodes, gap " << fmt4(sol.gap) << ", " << fmt4(timer.seconds())
            << " s total\n";
  ws::write_manifest(cfg, "schedule_m0", cfg.out_dir, timer.seconds());
  return kExitOk;
}

int cmd_validate(ws::RunConfig& cfg, const std::string& results_path,
                 const std::string& traces_spec) {
  Timer timer;
  const ws::GridCase grid = ws::load_case(cfg.case_path);
  cfg.validate(grid.num_wind_farms());
  const ws::DispatchSolution sol = ws::DispatchSolution::load(results_path);
  const ws::PtdfMatrix ptdf = ws::compute_ptdf(grid);
  const ws::Sensitivities sens = ws::compute_sensitivities(grid, ptdf);

  const int nf = grid.num_wind_farms();
  ws::ScenarioSet fresh = cfg.scenario_csv.empty()
      ? ws::ScenarioSet::gaussian(cfg.n_validate,
                                  Eigen::VectorXd::Constant(nf, cfg.wind_mean),
                                  cfg.stds_for(nf), cfg.validate_seed)
      : ws::ScenarioSet::from_csv(cfg.scenario_csv);

  ws::TraceRequest traces;
  if (!traces_spec.empty()) traces = parse_traces(traces_spec);
  ws::ViolationReport rep = monte_carlo_violation(sol, grid, ptdf, sens, fresh, traces);
  if (cfg.validate_seed == cfg.seed && cfg.scenario_csv.empty()) {
    rep.seed_collision_warning = true;
    std::cerr << "warning: validation seed equals training seed\n";
  }

  fs::create_directories(cfg.out_dir);
  const std::string stem = fs::path(results_path).stem().string();
  rep.save(cfg.out_dir + "/validation_" + stem + ".json");
  if (!rep.trace_names.empty())
    rep.save_traces_csv(cfg.out_dir + "/traces_" + stem + ".csv");

  std::cout << "Max transmission violation  "
            << fmt4(100 * rep.max_line_violation) << "%\n";
  std::cout << "Max generation violation    "
            << fmt4(100 * rep.max_gen_violation) << "%\n";
  ws::write_manifest(cfg, "validate_" + stem, cfg.out_dir, timer.seconds());
  return kExitOk;
}

int cmd_report(const std::string& case_path,
               const std::vector<std::string>& schedules,
               const std::vector<std::string>& validations) {
  const ws::GridCase grid = ws::load_case(case_path);
  const ws::PtdfMatrix ptdf = ws::compute_ptdf(grid);
  const ws::Sensitivities sens = ws::compute_sensitivities(grid, ptdf);

  struct Column {
    std::string label;
    ws::CostBreakdown cost;
    double max_line = -1, max_gen = -1;
  };
  std::vector<Column> cols;
  for (size_t i = 0; i < schedules.size(); ++i) {
    const ws::DispatchSolution d = ws::DispatchSolution::load(schedules[i]);
    Column c;
    c.label = d.method + (d.stage == "corrected" ? "" : " (" + d.stage + ")");
    c.cost = ws::cost_report(d, grid, sens, d.mean_at_caps);
    if (i < validations.size()) {
      std::ifstream in(validations[i]);
      if (!in) throw std::runtime_error("cannot read " + validations[i]);
      std::stringstream ss;
      ss << in.rdbuf();
      const auto j = nlohmann::json::parse(ss.str());
      c.max_line = j.at("max_line_violation").get<double>();
      c.max_gen = j.at("max_gen_violation").get<double>();
    }
    cols.push_back(c);
  }

  auto row = [&](const std::string& label, auto getter) {
    std::printf("%-36s", label.c_str());
    for (const auto& c : cols) std::printf("  %12s", fmt4(getter(c)).c_str());
    std::printf("\n");
  };
  std::printf("%-36s", "Metric");
  for (const auto& c : cols) std::printf("  %12s", c.label.c_str());
  std::printf("\n");
  row("Total operational cost ($)", [](const Column& c) { return c.cost.total; });
  row("Energy cost ($)", [](const Column& c) { return c.cost.energy; });
  row("Reserve cost ($)", [](const Column& c) { return c.cost.reserve; });
  row("Total up reserve capacity (MW)",
      [](const Column& c) { return c.cost.total_up_mw; });
  row("Total down reserve capacity (MW)",
      [](const Column& c) { return c.cost.total_dn_mw; });
  bool any_val = false;
  for (const auto& c : cols) any_val |= c.max_line >= 0;
  if (any_val) {
    row("Max transmission violation (%)",
        [](const Column& c) { return 100 * c.max_line; });
    row("Max generation violation (%)",
        [](const Column& c) { return 100 * c.max_gen; });
  }
  return kExitOk;
}

int cmd_import(const std::string& matpower_path,
               const std::vector<std::string>& wind_specs, int slack,
               double reserve_ratio, double default_limit,
               const std::string& out_path) {
  ws::MatpowerCase mpc = ws::parse_matpower(matpower_path);
  ws::ImportOptions opts;
  opts.slack_bus = slack;
  opts.reserve_cost_ratio = reserve_ratio;
  opts.default_limit_mw = default_limit;
  for (const auto& spec : wind_specs) {
    std::stringstream ss(spec);
    std::string part;
    ws::WindPlacement w;
    if (!std::getline(ss, part, ':')) throw std::invalid_argument("wind spec");
    w.bus = std::stoi(part);
    if (!std::getline(ss, part, ':')) throw std::invalid_argument("wind spec");
    w.forecast_mw = std::stod(part);
    if (!std::getline(ss, part, ':')) throw std::invalid_argument("wind spec");
    w.capacity_mw = std::stod(part);
    opts.wind.push_back(w);
  }
  const std::string text = ws::matpower_to_case_json(mpc, opts);
  // round-trip through the validator before writing
  ws::parse_case_json(text, out_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  std::cout << "case written to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy and reserve scheduling with dispatchable wind curtailment"};
  app.require_subcommand(1);

  ws::RunConfig cfg;
  // config file merges first; explicit flags override it
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      try {
        cfg.load_file(argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
      }
    }

  std::string traces_spec, method = "m0", bundle_path, caps_from, results_path;
  std::string ptdf_csv, config_path;
  double wind_std_scalar = -1;
  std::string wind_std_list;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--case", cfg.case_path, "case file");
    cmd->add_option("--epsilon", cfg.epsilon, "chance-constraint risk level");
    cmd->add_option("--seed", cfg.seed, "training scenario seed");
    cmd->add_option("--n-train", cfg.n_train, "training scenario count");
    cmd->add_option("--n-validate", cfg.n_validate, "validation scenario count");
    cmd->add_option("--gamma-rule", cfg.gamma_rule, "gaussian|cantelli");
    cmd->add_option("--pwl-segments", cfg.pwl_segments, "segments per surrogate");
    cmd->add_option("--wind-mean", cfg.wind_mean, "deviation mean (MW)");
    cmd->add_option("--wind-std", wind_std_list,
                    "deviation std, scalar or comma list (MW)");
    cmd->add_option("--scenario-csv", cfg.scenario_csv, "historical deviations csv");
    cmd->add_option("--out-dir", cfg.out_dir, "output directory");
    cmd->add_option("--wc0", cfg.wc0, "cap enumeration start (MW)");
    cmd->add_option("--t-wc", cfg.t_wc, "cap enumeration step (MW)");
    cmd->add_option("--lhs-extra", cfg.lhs_extra, "extra hypercube grid points");
    cmd->add_option("--jitter", cfg.gp_jitter, "gp jitter start scale");
    cmd->add_option("--solver-tol", cfg.solver_tol, "interior-point tolerance");
    cmd->add_option("--mip-gap", cfg.mip_gap, "branch-and-bound gap");
    cmd->add_option("--node-limit", cfg.node_limit, "branch-and-bound node limit");
    cmd->add_option("--validate-seed", cfg.validate_seed, "validation seed");
    cmd->add_option("--dump-program", cfg.dump_program, "write solver problem dump");
  };

  auto* inspect = app.add_subcommand("inspect", "print a case summary");
  inspect->add_option("--case", cfg.case_path, "case file")->required();
  inspect->add_option("--ptdf", ptdf_csv, "write the PTDF matrix as csv");

  auto* train = app.add_subcommand("train", "train the surrogate bundle");
  add_common(train);

  auto* schedule = app.add_subcommand("schedule", "solve a scheduling model");
  add_common(schedule);
  schedule->add_option("--method", method, "m0|m1");
  schedule->add_option("--bundle", bundle_path, "surrogate bundle path");
  schedule->add_option("--caps-from", caps_from,
                       "fix caps at another run's optimum (m1)");
  schedule->add_option("--fix-caps", cfg.fix_caps, "free|max");
  schedule->add_option("--correction", cfg.correction,
                       "empirical|se-gp|surrogate");

  auto* validate = app.add_subcommand("validate", "Monte-Carlo check a dispatch");
  add_common(validate);
  validate->add_option("--results", results_path, "dispatch results file")
      ->required();
  validate->add_option("--traces", traces_spec, "e.g. line=6,gen=2");

  std::vector<std::string> schedules, validations;
  auto* report = app.add_subcommand("report", "side-by-side comparison table");
  report->add_option("--case", cfg.case_path, "case file")->required();
  report->add_option("--schedule", schedules, "schedule result files")->required();
  report->add_option("--validation", validations, "validation report files");

  std::string matpower_path, import_out;
  std::vector<std::string> wind_specs;
  int import_slack = 0;
  double import_ratio = 0.2, import_limit = 10000;
  auto* import = app.add_subcommand("import", "convert a MATPOWER .m case");
  import->add_option("--matpower", matpower_path, "matpower .m file")->required();
  import->add_option("--wind", wind_specs, "bus:forecast:capacity (repeatable)");
  import->add_option("--slack", import_slack, "slack bus override");
  import->add_option("--reserve-ratio", import_ratio, "reserve cost ratio");
  import->add_option("--default-limit", import_limit,
                     "limit for unrated branches (MW)");
  import->add_option("-o,--out", import_out, "output case file")->required();

  CLI11_PARSE(app, argc, argv);

  if (!wind_std_list.empty()) {
    std::stringstream ss(wind_std_list);
    std::string part;
    std::vector<double> vals;
    while (std::getline(ss, part, ',')) vals.push_back(std::stod(part));
    cfg.wind_std.resize(vals.size());
    for (size_t i = 0; i < vals.size(); ++i)
      cfg.wind_std[static_cast<int>(i)] = vals[i];
  }
  if (cfg.wind_std.size() == 0) {
    cfg.wind_std.resize(1);
    cfg.wind_std[0] = 200.0;
  }
  (void)wind_std_scalar;

  try {
    if (inspect->parsed()) return cmd_inspect(cfg.case_path, ptdf_csv);
    if (train->parsed()) return cmd_train(cfg);
    if (schedule->parsed()) return cmd_schedule(cfg, method, bundle_path, caps_from);
    if (validate->parsed()) return cmd_validate(cfg, results_path, traces_spec);
    if (report->parsed()) return cmd_report(cfg.case_path, schedules, validations);
    if (import->parsed())
      return cmd_import(matpower_path, wind_specs, import_slack, import_ratio,
                        import_limit, import_out);
  } catch (const ws::CaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
