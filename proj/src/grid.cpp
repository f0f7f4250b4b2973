#include "windsched/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace windsched {

using nlohmann::json;

GridCase::GridCase(std::vector<Bus> buses, std::vector<Line> lines,
                   std::vector<Generator> generators,
                   std::vector<WindFarm> wind_farms, int slack_bus,
                   double base_mva)
    : buses_(std::move(buses)),
      lines_(std::move(lines)),
      generators_(std::move(generators)),
      wind_farms_(std::move(wind_farms)),
      slack_bus_(slack_bus),
      base_mva_(base_mva) {
  bus_index_.reserve(buses_.size());
  for (int i = 0; i < static_cast<int>(buses_.size()); ++i)
    bus_index_.emplace_back(buses_[i].id, i);
  std::sort(bus_index_.begin(), bus_index_.end());
  validate();
}

int GridCase::bus_index(int bus_id) const {
  auto it = std::lower_bound(bus_index_.begin(), bus_index_.end(),
                             std::make_pair(bus_id, -1));
  if (it == bus_index_.end() || it->first != bus_id)
    throw CaseError("bus:" + std::to_string(bus_id), "unknown bus id");
  return it->second;
}

double GridCase::total_demand() const {
  double d = 0;
  for (const auto& b : buses_) d += b.demand_mw;
  return d;
}

double GridCase::total_wind_forecast() const {
  double w = 0;
  for (const auto& f : wind_farms_) w += f.forecast_mw;
  return w;
}

Eigen::VectorXd GridCase::wind_forecasts() const {
  Eigen::VectorXd v(num_wind_farms());
  for (int i = 0; i < num_wind_farms(); ++i) v[i] = wind_farms_[i].forecast_mw;
  return v;
}

Eigen::VectorXd GridCase::wind_capacities() const {
  Eigen::VectorXd v(num_wind_farms());
  for (int i = 0; i < num_wind_farms(); ++i) v[i] = wind_farms_[i].capacity_mw;
  return v;
}

void GridCase::validate() const {
  if (buses_.empty()) throw CaseError("buses", "empty bus list");
  for (size_t i = 1; i < bus_index_.size(); ++i)
    if (bus_index_[i].first == bus_index_[i - 1].first)
      throw CaseError("buses[" + std::to_string(bus_index_[i].second) + "].id",
                      "duplicate bus id");
  bool slack_found = false;
  for (const auto& b : buses_)
    if (b.id == slack_bus_) slack_found = true;
  if (!slack_found) throw CaseError("slack_bus", "missing slack");

  for (size_t l = 0; l < lines_.size(); ++l) {
    const std::string p = "lines[" + std::to_string(l) + "]";
    if (lines_[l].reactance_pu <= 0)
      throw CaseError(p + ".reactance", "must be > 0");
    if (lines_[l].limit_mw <= 0) throw CaseError(p + ".limit", "must be > 0");
    bus_index(lines_[l].from_bus);
    bus_index(lines_[l].to_bus);
  }
  for (size_t g = 0; g < generators_.size(); ++g) {
    const std::string p = "generators[" + std::to_string(g) + "]";
    if (generators_[g].p_min_mw > generators_[g].p_max_mw)
      throw CaseError(p + ".p_min", "p_min > p_max");
    bus_index(generators_[g].bus);
  }
  for (size_t w = 0; w < wind_farms_.size(); ++w) {
    const std::string p = "wind_farms[" + std::to_string(w) + "]";
    if (wind_farms_[w].forecast_mw < 0)
      throw CaseError(p + ".forecast", "must be >= 0");
    if (wind_farms_[w].forecast_mw > wind_farms_[w].capacity_mw)
      throw CaseError(p + ".forecast", "exceeds installed capacity");
    bus_index(wind_farms_[w].bus);
  }

  // connectivity (ignoring line limits)
  const int n = num_buses();
  std::vector<std::vector<int>> adj(n);
  for (const auto& l : lines_) {
    int a = bus_index(l.from_bus), b = bus_index(l.to_bus);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
  }
  if (count != n) throw CaseError("lines", "disconnected network");
}

namespace {

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw CaseError(path, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw CaseError(path, "expected an integer");
  return j.get<int>();
}

const json& require_key(const json& j, const std::string& key,
                        const std::string& path) {
  if (!j.contains(key)) throw CaseError(path + "." + key, "missing field");
  return j.at(key);
}

}  // namespace

GridCase parse_case_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CaseError(origin, std::string("invalid JSON: ") + e.what());
  }

  int slack_count = 0;
  if (j.contains("slack_bus") && j["slack_bus"].is_array()) {
    slack_count = static_cast<int>(j["slack_bus"].size());
    if (slack_count != 1) throw CaseError("slack_bus", "multiple slack");
    j["slack_bus"] = j["slack_bus"][0];
  }
  const int slack = require_int(require_key(j, "slack_bus", "case"), "slack_bus");
  const double base = j.value("base_mva", 100.0);

  std::vector<Bus> buses;
  for (size_t i = 0; i < require_key(j, "buses", "case").size(); ++i) {
    const auto& bj = j["buses"][i];
    const std::string p = "buses[" + std::to_string(i) + "]";
    Bus b;
    b.id = require_int(require_key(bj, "id", p), p + ".id");
    b.demand_mw = require_number(require_key(bj, "demand", p), p + ".demand");
    buses.push_back(b);
  }
  std::vector<Line> lines;
  for (size_t i = 0; i < require_key(j, "lines", "case").size(); ++i) {
    const auto& lj = j["lines"][i];
    const std::string p = "lines[" + std::to_string(i) + "]";
    Line l;
    l.id = lj.value("id", static_cast<int>(i) + 1);
    l.from_bus = require_int(require_key(lj, "from", p), p + ".from");
    l.to_bus = require_int(require_key(lj, "to", p), p + ".to");
    l.reactance_pu = require_number(require_key(lj, "reactance", p), p + ".reactance");
    l.limit_mw = require_number(require_key(lj, "limit", p), p + ".limit");
    lines.push_back(l);
  }
  std::vector<Generator> gens;
  for (size_t i = 0; i < require_key(j, "generators", "case").size(); ++i) {
    const auto& gj = j["generators"][i];
    const std::string p = "generators[" + std::to_string(i) + "]";
    Generator g;
    g.id = gj.value("id", static_cast<int>(i) + 1);
    g.bus = require_int(require_key(gj, "bus", p), p + ".bus");
    g.p_min_mw = require_number(require_key(gj, "p_min", p), p + ".p_min");
    g.p_max_mw = require_number(require_key(gj, "p_max", p), p + ".p_max");
    g.energy_cost = require_number(require_key(gj, "energy_cost", p), p + ".energy_cost");
    g.reserve_cost = require_number(require_key(gj, "reserve_cost", p), p + ".reserve_cost");
    gens.push_back(g);
  }
  std::vector<WindFarm> farms;
  for (size_t i = 0; i < require_key(j, "wind_farms", "case").size(); ++i) {
    const auto& wj = j["wind_farms"][i];
    const std::string p = "wind_farms[" + std::to_string(i) + "]";
    WindFarm w;
    w.id = wj.value("id", static_cast<int>(i) + 1);
    w.bus = require_int(require_key(wj, "bus", p), p + ".bus");
    w.forecast_mw = require_number(require_key(wj, "forecast", p), p + ".forecast");
    w.capacity_mw = require_number(require_key(wj, "capacity", p), p + ".capacity");
    farms.push_back(w);
  }
  return GridCase(std::move(buses), std::move(lines), std::move(gens),
                  std::move(farms), slack, base);
}

GridCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CaseError(path, "cannot open case file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case_json(ss.str(), path);
}

PtdfMatrix compute_ptdf(const GridCase& grid) {
  const int n = grid.num_buses();
  const int m = grid.num_lines();
  const int slack = grid.slack_index();

  Eigen::MatrixXd b_bus = Eigen::MatrixXd::Zero(n, n);
  for (const auto& l : grid.lines()) {
    const double b = 1.0 / l.reactance_pu;
    const int f = grid.bus_index(l.from_bus);
    const int t = grid.bus_index(l.to_bus);
    b_bus(f, f) += b;
    b_bus(t, t) += b;
    b_bus(f, t) -= b;
    b_bus(t, f) -= b;
  }

  // reduced susceptance matrix with the slack row/column removed
  Eigen::MatrixXd b_red(n - 1, n - 1);
  auto red = [slack](int i) { return i < slack ? i : i - 1; };
  for (int i = 0; i < n; ++i) {
    if (i == slack) continue;
    for (int k = 0; k < n; ++k) {
      if (k == slack) continue;
      b_red(red(i), red(k)) = b_bus(i, k);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b_red);
  if (!lu.isInvertible())
    throw CaseError("lines", "singular susceptance matrix");
  Eigen::MatrixXd x_red = lu.inverse();

  // X augmented with zero slack row/column
  Eigen::MatrixXd x_full = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i == slack) continue;
    for (int k = 0; k < n; ++k) {
      if (k == slack) continue;
      x_full(i, k) = x_red(red(i), red(k));
    }
  }

  PtdfMatrix out;
  out.slack_index = slack;
  out.factors.resize(m, n);
  for (int l = 0; l < m; ++l) {
    const auto& ln = grid.lines()[l];
    const double b = 1.0 / ln.reactance_pu;
    const int f = grid.bus_index(ln.from_bus);
    const int t = grid.bus_index(ln.to_bus);
    out.factors.row(l) = b * (x_full.row(f) - x_full.row(t));
  }
  out.factors.col(slack).setZero();
  return out;
}

Eigen::VectorXd participation_factors(const GridCase& grid) {
  const int g = grid.num_generators();
  if (g == 0) throw CaseError("generators", "no balancing capacity");
  Eigen::VectorXd beta(g);
  double total = 0;
  for (int i = 0; i < g; ++i) {
    beta[i] = grid.generators()[i].p_max_mw;
    total += beta[i];
  }
  if (total <= 0) throw CaseError("generators", "no balancing capacity");
  return beta / total;
}

Eigen::MatrixXd wind_flow_sensitivity(const PtdfMatrix& ptdf,
                                      const Eigen::VectorXd& beta,
                                      const GridCase& grid) {
  if (beta.size() != grid.num_generators())
    throw CaseError("beta", "dimension mismatch with generators");
  const double bsum = beta.sum();
  if (std::abs(bsum - 1.0) > 1e-9)
    throw CaseError("beta", "participation factors must sum to 1");

  const int m = grid.num_lines();
  // response of line flows to a 1 MW system imbalance absorbed via beta
  Eigen::VectorXd response = Eigen::VectorXd::Zero(m);
  for (int g = 0; g < grid.num_generators(); ++g)
    response += beta[g] * ptdf.factors.col(grid.bus_index(grid.generators()[g].bus));

  Eigen::MatrixXd k(m, grid.num_wind_farms());
  for (int w = 0; w < grid.num_wind_farms(); ++w)
    k.col(w) =
        ptdf.factors.col(grid.bus_index(grid.wind_farms()[w].bus)) - response;
  return k;
}

Sensitivities compute_sensitivities(const GridCase& grid,
                                    const PtdfMatrix& ptdf) {
  Sensitivities s;
  s.beta = participation_factors(grid);
  s.wind_to_flow = wind_flow_sensitivity(ptdf, s.beta, grid);
  return s;
}

}  // namespace windsched
