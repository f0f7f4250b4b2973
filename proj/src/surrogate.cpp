#include "windsched/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace windsched {

using nlohmann::json;

std::string ConstraintId::str() const {
  switch (kind) {
    case Kind::LineUpper: return "line_upper:" + std::to_string(index);
    case Kind::LineLower: return "line_lower:" + std::to_string(index);
    case Kind::GenUp: return "gen_up:" + std::to_string(index);
    case Kind::GenDown: return "gen_down:" + std::to_string(index);
  }
  return "?";
}

MomentSamples gen_moment_samples(const ScenarioSet& set, int farm,
                                 double forecast, double capacity, double wc0,
                                 double step) {
  if (wc0 < forecast - 1e-9 || wc0 > capacity + 1e-9)
    throw std::invalid_argument("gen_moment_samples: wc0 outside [forecast, capacity]");
  if (step <= 0) throw std::invalid_argument("gen_moment_samples: step must be > 0");
  if (set.size() < 2)
    throw std::invalid_argument("gen_moment_samples: need >= 2 scenarios");

  const double slack = 1e-9 * std::max(1.0, capacity);
  std::vector<double> caps;
  for (int k = 0;; ++k) {
    const double cap = wc0 + k * step;
    if (cap > capacity + slack) break;
    caps.push_back(std::min(cap, capacity));
  }
  if (caps.empty()) throw std::invalid_argument("gen_moment_samples: empty grid");

  MomentSamples out;
  out.caps.resize(caps.size());
  out.mean.resize(caps.size());
  out.stddev.resize(caps.size());
  const auto& col = set.deviations().col(farm);
  const int n = set.size();
  for (size_t k = 0; k < caps.size(); ++k) {
    const double headroom = caps[k] - forecast;
    Eigen::ArrayXd capped = col.array().min(headroom);
    const double mu = capped.mean();
    const double var = (capped - mu).square().sum() / (n - 1);
    out.caps[k] = caps[k];
    out.mean[k] = mu;
    out.stddev[k] = std::sqrt(std::max(0.0, var));
  }
  return out;
}

Eigen::MatrixXd build_kappa_grid(const GridCase& grid,
                                 const Eigen::VectorXd& wc0,
                                 const Eigen::VectorXd& step, int lhs_extra,
                                 std::uint64_t lhs_seed) {
  const int f = grid.num_wind_farms();
  const Eigen::VectorXd cap_hi = grid.wind_capacities();
  int diag = 0;
  for (int i = 0; i < f; ++i) {
    const double slack = 1e-9 * std::max(1.0, cap_hi[i]);
    int k = 0;
    while (wc0[i] + k * step[i] <= cap_hi[i] + slack) ++k;
    diag = std::max(diag, k);
  }
  const bool use_lhs = f > 1 && lhs_extra > 0;
  Eigen::MatrixXd inputs(diag + (use_lhs ? lhs_extra : 0), f);
  for (int k = 0; k < diag; ++k)
    for (int i = 0; i < f; ++i)
      inputs(k, i) = std::min(wc0[i] + k * step[i], cap_hi[i]);

  if (use_lhs) {
    // Latin hypercube over the cap box; a diagonal-only walk under-determines
    // a multivariate fit
    std::mt19937_64 rng(lhs_seed);
    const double scale = 1.0 / 18446744073709551616.0;
    for (int i = 0; i < f; ++i) {
      std::vector<int> perm(lhs_extra);
      for (int k = 0; k < lhs_extra; ++k) perm[k] = k;
      for (int k = lhs_extra - 1; k > 0; --k) {
        const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(k + 1));
        std::swap(perm[k], perm[j]);
      }
      for (int k = 0; k < lhs_extra; ++k) {
        const double u = (perm[k] + (static_cast<double>(rng()) + 0.5) * scale) /
                         lhs_extra;
        inputs(diag + k, i) = wc0[i] + u * (cap_hi[i] - wc0[i]);
      }
    }
  }
  return inputs;
}

KappaSamples gen_kappa_samples(const ScenarioSet& set, const GridCase& grid,
                               const Sensitivities& sens,
                               const Eigen::MatrixXd& inputs, double gamma0,
                               double epsilon) {
  const int f = grid.num_wind_farms();
  const int nl = grid.num_lines();
  const int ng = grid.num_generators();
  if (inputs.cols() != f)
    throw std::invalid_argument("gen_kappa_samples: grid/case farm mismatch");
  const Eigen::VectorXd forecasts = grid.wind_forecasts();

  KappaSamples out;
  const int c_total = 2 * nl + 2 * ng;
  out.inputs = inputs;
  out.margins.resize(inputs.rows(), c_total);
  out.rough.resize(inputs.rows(), c_total);
  out.ids.reserve(c_total);
  for (int l = 0; l < nl; ++l)
    out.ids.push_back({ConstraintId::Kind::LineUpper, l});
  for (int l = 0; l < nl; ++l)
    out.ids.push_back({ConstraintId::Kind::LineLower, l});
  for (int g = 0; g < ng; ++g) out.ids.push_back({ConstraintId::Kind::GenUp, g});
  for (int g = 0; g < ng; ++g)
    out.ids.push_back({ConstraintId::Kind::GenDown, g});

  for (int p = 0; p < inputs.rows(); ++p) {
    const Eigen::VectorXd caps = inputs.row(p);
    const Eigen::MatrixXd capped = capped_deviations(set, caps, forecasts);
    const TruncatedMoments mom = truncated_stats(set, caps, forecasts);
    const Eigen::MatrixXd flows = uncertainty_flows(sens.wind_to_flow, capped);
    const Eigen::VectorXd totals = capped.rowwise().sum();

    const double mu_sum = mom.mean.sum();
    const double sig_norm = mom.stddev.norm();
    const double t_lo = empirical_margin(totals, epsilon, MarginSide::Lower);
    const double t_up = empirical_margin(totals, epsilon, MarginSide::Upper);

    for (int l = 0; l < nl; ++l) {
      const Eigen::VectorXd k_row = sens.wind_to_flow.row(l);
      const double k_mu = k_row.dot(mom.mean);
      const double k_sig = (k_row.array() * mom.stddev.array()).matrix().norm();
      out.margins(p, l) = empirical_margin(flows.col(l), epsilon, MarginSide::Upper);
      out.rough(p, l) = k_mu + gamma0 * k_sig;
      out.margins(p, nl + l) =
          -empirical_margin(flows.col(l), epsilon, MarginSide::Lower);
      out.rough(p, nl + l) = -k_mu + gamma0 * k_sig;
    }
    for (int g = 0; g < ng; ++g) {
      const double beta = sens.beta[g];
      out.margins(p, 2 * nl + g) = -beta * t_lo;  // upper quantile of -beta*sum
      out.rough(p, 2 * nl + g) = -beta * mu_sum + gamma0 * beta * sig_norm;
      out.margins(p, 2 * nl + ng + g) = beta * t_up;
      out.rough(p, 2 * nl + ng + g) = beta * mu_sum + gamma0 * beta * sig_norm;
    }
  }
  out.targets = out.margins - out.rough;
  return out;
}

int SurrogateBundle::kappa_index(const ConstraintId& id) const {
  for (size_t i = 0; i < constraint_ids.size(); ++i)
    if (constraint_ids[i].kind == id.kind && constraint_ids[i].index == id.index)
      return static_cast<int>(i);
  throw std::invalid_argument("unknown constraint id " + id.str());
}

double SurrogateBundle::kappa_at(const ConstraintId& id,
                                 const Eigen::VectorXd& caps) const {
  return kappa_coeffs.row(kappa_index(id)).dot(caps);
}

SurrogateBundle build_bundle(const GridCase& grid, const Sensitivities& sens,
                             const ScenarioSet& set,
                             const SurrogateConfig& config) {
  if (!(config.epsilon > 0 && config.epsilon < 0.5))
    throw std::invalid_argument("build_bundle: epsilon must lie in (0, 0.5)");
  if (grid.num_wind_farms() != set.num_farms())
    throw std::invalid_argument("build_bundle: case/scenario farm mismatch");
  const int f = grid.num_wind_farms();

  SurrogateBundle b;
  b.epsilon = config.epsilon;
  b.gamma_rule = config.gamma_rule;
  b.gamma0 = gamma_multiplier(config.gamma_rule, config.epsilon);
  b.pwl_segments = config.pwl_segments;
  b.n_scenarios = set.size();
  b.scenario_source = set.source();
  b.lhs_extra = f > 1 ? config.lhs_extra : 0;

  b.wc0.resize(f);
  b.t_wc.resize(f);
  for (int i = 0; i < f; ++i) {
    const auto& farm = grid.wind_farms()[i];
    b.wc0[i] = config.wc0 > 0 ? config.wc0 : farm.forecast_mw;
    b.t_wc[i] = config.t_wc > 0 ? config.t_wc
                                : (farm.capacity_mw - b.wc0[i]) / 20.0;
    if (b.t_wc[i] <= 0)
      throw std::invalid_argument("build_bundle: farm " + std::to_string(i) +
                                  " has no cap headroom for a grid");
  }

  // moment surrogates per farm
  for (int i = 0; i < f; ++i) {
    const auto& farm = grid.wind_farms()[i];
    const MomentSamples ms =
        gen_moment_samples(set, i, farm.forecast_mw, farm.capacity_mw, b.wc0[i],
                           b.t_wc[i]);
    FarmSurrogate fs;
    fs.farm = i;
    Eigen::MatrixXd x(ms.caps.size(), 1);
    x.col(0) = ms.caps;
    try {
      fs.mean_gp = gp_fit(x, ms.mean, KernelKind::SquaredExponential, config.gp);
      fs.std_gp = gp_fit(x, ms.stddev, KernelKind::SquaredExponential, config.gp);
    } catch (const std::exception& e) {
      throw std::runtime_error("GP fit failed for farm " + std::to_string(i) +
                               ": " + e.what());
    }
    fs.mean_pwl = PwlFunction::approximate(
        [&](double wc) { return fs.mean_gp.predict1(wc); }, farm.forecast_mw,
        farm.capacity_mw, config.pwl_segments);
    // the std surrogate is clipped at zero; a clip beyond noise level means
    // the fit went bad
    const double max_sigma = ms.stddev.maxCoeff();
    PwlFunction raw_std = PwlFunction::approximate(
        [&](double wc) { return fs.std_gp.predict1(wc); }, farm.forecast_mw,
        farm.capacity_mw, config.pwl_segments);
    Eigen::VectorXd clipped = raw_std.values();
    for (int s = 0; s < clipped.size(); ++s) {
      if (clipped[s] < -1e-6 * std::max(1.0, max_sigma))
        throw std::runtime_error("std surrogate for farm " + std::to_string(i) +
                                 " went negative beyond tolerance");
      clipped[s] = std::max(0.0, clipped[s]);
    }
    fs.std_pwl = PwlFunction(raw_std.breakpoints(), clipped, raw_std.max_error());
    b.farms.push_back(std::move(fs));
  }

  // error-compensation surrogates per chance constraint
  const Eigen::MatrixXd grid_inputs =
      build_kappa_grid(grid, b.wc0, b.t_wc, b.lhs_extra, /*lhs_seed=*/1u);
  b.diag_points = static_cast<int>(grid_inputs.rows()) - b.lhs_extra;
  const KappaSamples ks =
      gen_kappa_samples(set, grid, sens, grid_inputs, b.gamma0, b.epsilon);
  b.constraint_ids = ks.ids;
  b.kappa_inputs = ks.inputs;
  b.kappa_targets = ks.targets;
  b.kappa_rough = ks.rough;
  b.kappa_margins = ks.margins;
  b.kappa_coeffs.resize(ks.targets.cols(), f);
  for (int c = 0; c < ks.targets.cols(); ++c) {
    try {
      const GpModel gp =
          gp_fit(ks.inputs, ks.targets.col(c), KernelKind::Linear, config.gp);
      b.kappa_coeffs.row(c) = gp.linear_coefficients();
    } catch (const std::exception& e) {
      throw std::runtime_error("GP fit failed for constraint " +
                               ks.ids[c].str() + ": " + e.what());
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r)));
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r)
    m.row(static_cast<int>(r)) = vec_from_json(rows[r]).transpose();
  return m;
}

json gp_to_json(const GpModel& gp) {
  return {{"kind", gp.kind == KernelKind::Linear ? "linear" : "se"},
          {"amplitude", gp.amplitude},
          {"length", gp.length},
          {"jitter", gp.jitter},
          {"inputs", mat_to_json(gp.inputs)},
          {"weights", vec_to_json(gp.weights)}};
}

GpModel gp_from_json(const json& j) {
  GpModel gp;
  gp.kind = j.at("kind").get<std::string>() == "linear" ? KernelKind::Linear
                                                        : KernelKind::SquaredExponential;
  gp.amplitude = j.at("amplitude").get<double>();
  gp.length = j.at("length").get<double>();
  gp.jitter = j.at("jitter").get<double>();
  gp.inputs = mat_from_json(j.at("inputs"));
  gp.weights = vec_from_json(j.at("weights"));
  return gp;
}

json pwl_to_json(const PwlFunction& p) {
  return {{"breakpoints", vec_to_json(p.breakpoints())},
          {"values", vec_to_json(p.values())},
          {"max_error", p.max_error()}};
}

PwlFunction pwl_from_json(const json& j) {
  return PwlFunction(vec_from_json(j.at("breakpoints")),
                     vec_from_json(j.at("values")),
                     j.at("max_error").get<double>());
}

std::string kind_str(ConstraintId::Kind k) {
  switch (k) {
    case ConstraintId::Kind::LineUpper: return "line_upper";
    case ConstraintId::Kind::LineLower: return "line_lower";
    case ConstraintId::Kind::GenUp: return "gen_up";
    case ConstraintId::Kind::GenDown: return "gen_down";
  }
  return "?";
}

ConstraintId::Kind kind_from_str(const std::string& s) {
  if (s == "line_upper") return ConstraintId::Kind::LineUpper;
  if (s == "line_lower") return ConstraintId::Kind::LineLower;
  if (s == "gen_up") return ConstraintId::Kind::GenUp;
  if (s == "gen_down") return ConstraintId::Kind::GenDown;
  throw std::invalid_argument("unknown constraint kind: " + s);
}

}  // namespace

std::string SurrogateBundle::to_json() const {
  json j;
  j["format"] = "windsched-bundle";
  j["version"] = version;
  j["epsilon"] = epsilon;
  j["gamma_rule"] = windsched::to_string(gamma_rule);
  j["gamma0"] = gamma0;
  j["pwl_segments"] = pwl_segments;
  j["grid"] = {{"wc0", vec_to_json(wc0)},
               {"t_wc", vec_to_json(t_wc)},
               {"diag_points", diag_points},
               {"lhs_extra", lhs_extra},
               {"n_scenarios", n_scenarios},
               {"scenario_source", scenario_source}};
  json farms_j = json::array();
  for (const auto& fs : farms)
    farms_j.push_back({{"farm", fs.farm},
                       {"mean_gp", gp_to_json(fs.mean_gp)},
                       {"std_gp", gp_to_json(fs.std_gp)},
                       {"mean_pwl", pwl_to_json(fs.mean_pwl)},
                       {"std_pwl", pwl_to_json(fs.std_pwl)}});
  j["farms"] = farms_j;
  json ids = json::array();
  for (const auto& id : constraint_ids)
    ids.push_back({{"kind", kind_str(id.kind)}, {"index", id.index}});
  j["constraints"] = ids;
  j["kappa_coeffs"] = mat_to_json(kappa_coeffs);
  j["kappa_inputs"] = mat_to_json(kappa_inputs);
  j["kappa_targets"] = mat_to_json(kappa_targets);
  j["kappa_rough"] = mat_to_json(kappa_rough);
  j["kappa_margins"] = mat_to_json(kappa_margins);
  return j.dump(1) + "\n";
}

SurrogateBundle SurrogateBundle::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "windsched-bundle")
    throw std::invalid_argument("not a surrogate bundle file");
  SurrogateBundle b;
  b.version = j.at("version").get<int>();
  b.epsilon = j.at("epsilon").get<double>();
  b.gamma_rule = gamma_rule_from_string(j.at("gamma_rule").get<std::string>());
  b.gamma0 = j.at("gamma0").get<double>();
  b.pwl_segments = j.at("pwl_segments").get<int>();
  const auto& g = j.at("grid");
  b.wc0 = vec_from_json(g.at("wc0"));
  b.t_wc = vec_from_json(g.at("t_wc"));
  b.diag_points = g.at("diag_points").get<int>();
  b.lhs_extra = g.at("lhs_extra").get<int>();
  b.n_scenarios = g.at("n_scenarios").get<int>();
  b.scenario_source = g.at("scenario_source").get<std::string>();
  for (const auto& fj : j.at("farms")) {
    FarmSurrogate fs;
    fs.farm = fj.at("farm").get<int>();
    fs.mean_gp = gp_from_json(fj.at("mean_gp"));
    fs.std_gp = gp_from_json(fj.at("std_gp"));
    fs.mean_pwl = pwl_from_json(fj.at("mean_pwl"));
    fs.std_pwl = pwl_from_json(fj.at("std_pwl"));
    b.farms.push_back(std::move(fs));
  }
  for (const auto& ij : j.at("constraints"))
    b.constraint_ids.push_back(
        {kind_from_str(ij.at("kind").get<std::string>()), ij.at("index").get<int>()});
  b.kappa_coeffs = mat_from_json(j.at("kappa_coeffs"));
  b.kappa_inputs = mat_from_json(j.at("kappa_inputs"));
  b.kappa_targets = mat_from_json(j.at("kappa_targets"));
  b.kappa_rough = mat_from_json(j.at("kappa_rough"));
  b.kappa_margins = mat_from_json(j.at("kappa_margins"));
  return b;
}

void SurrogateBundle::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write bundle: " + path);
  out << to_json();
}

SurrogateBundle SurrogateBundle::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read bundle: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace windsched
