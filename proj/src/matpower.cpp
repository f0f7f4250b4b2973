#include "windsched/matpower.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "windsched/grid.hpp"

namespace windsched {

using nlohmann::json;

namespace {

// Strips MATLAB comments and reads the bracketed numeric block following
// "mpc.<name> = [".
std::vector<std::vector<double>> read_matrix(const std::string& body,
                                             const std::string& name) {
  const std::string key = "mpc." + name;
  size_t pos = body.find(key);
  if (pos == std::string::npos) return {};
  pos = body.find('[', pos);
  size_t end = body.find(']', pos);
  if (pos == std::string::npos || end == std::string::npos)
    throw CaseError(key, "unterminated matrix");
  std::string block = body.substr(pos + 1, end - pos - 1);
  std::vector<std::vector<double>> rows;
  std::stringstream ss(block);
  std::string line;
  while (std::getline(ss, line, ';')) {
    std::stringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    size_t c = line.find('%');
    if (c != std::string::npos) line.erase(c);
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

MatpowerCase parse_matpower(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CaseError(path, "cannot open matpower file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string body = strip_comments(ss.str());

  MatpowerCase mpc;
  size_t pos = body.find("mpc.baseMVA");
  if (pos != std::string::npos) {
    pos = body.find('=', pos);
    if (pos != std::string::npos) {
      std::stringstream vs(body.substr(pos + 1, 32));
      vs >> mpc.base_mva;
    }
  }
  mpc.bus = read_matrix(body, "bus");
  mpc.gen = read_matrix(body, "gen");
  mpc.branch = read_matrix(body, "branch");
  mpc.gencost = read_matrix(body, "gencost");
  if (mpc.bus.empty()) throw CaseError(path, "missing mpc.bus");
  if (mpc.gen.empty()) throw CaseError(path, "missing mpc.gen");
  if (mpc.branch.empty()) throw CaseError(path, "missing mpc.branch");
  return mpc;
}

std::string matpower_to_case_json(const MatpowerCase& mpc,
                                  const ImportOptions& opts) {
  json j;
  j["base_mva"] = mpc.base_mva;

  int slack = opts.slack_bus;
  json buses = json::array();
  for (size_t i = 0; i < mpc.bus.size(); ++i) {
    const auto& row = mpc.bus[i];
    if (row.size() < 3)
      throw CaseError("bus[" + std::to_string(i) + "]", "too few columns");
    buses.push_back({{"id", static_cast<int>(row[0])}, {"demand", row[2]}});
    if (slack == 0 && row.size() > 1 && static_cast<int>(row[1]) == 3)
      slack = static_cast<int>(row[0]);
  }
  if (slack == 0) throw CaseError("bus", "no slack (type 3) bus found");
  j["slack_bus"] = slack;
  j["buses"] = buses;

  json lines = json::array();
  for (size_t i = 0; i < mpc.branch.size(); ++i) {
    const auto& row = mpc.branch[i];
    if (row.size() < 6)
      throw CaseError("branch[" + std::to_string(i) + "]", "too few columns");
    double limit = row[5];
    if (limit <= 0) limit = opts.default_limit_mw;
    lines.push_back({{"id", static_cast<int>(i) + 1},
                     {"from", static_cast<int>(row[0])},
                     {"to", static_cast<int>(row[1])},
                     {"reactance", row[3]},
                     {"limit", limit}});
  }
  j["lines"] = lines;

  json gens = json::array();
  for (size_t i = 0; i < mpc.gen.size(); ++i) {
    const auto& row = mpc.gen[i];
    if (row.size() < 10)
      throw CaseError("gen[" + std::to_string(i) + "]", "too few columns");
    const double p_max = row[8];
    const double p_min = row[9];
    if (p_max <= 0) continue;  // synchronous condensers carry no energy

    double energy_cost = 0.0;
    if (i < mpc.gencost.size()) {
      const auto& cost = mpc.gencost[i];
      // model 2: polynomial c_n x^n + ... + c_0; model 1: piecewise points
      if (!cost.empty() && static_cast<int>(cost[0]) == 2 && cost.size() >= 5) {
        const int n_coef = static_cast<int>(cost[3]);
        // marginal cost of the polynomial at half loading
        double x = p_max / 2.0;
        for (int k = 0; k < n_coef - 1; ++k) {
          const double c = cost[4 + k];
          const int power = n_coef - 1 - k;
          energy_cost += power * c * std::pow(x, power - 1);
        }
      } else if (!cost.empty() && static_cast<int>(cost[0]) == 1 &&
                 cost.size() >= 8) {
        const double x0 = cost[4], y0 = cost[5];
        const double x1 = cost[cost.size() - 2], y1 = cost[cost.size() - 1];
        if (x1 > x0) energy_cost = (y1 - y0) / (x1 - x0);
      }
    }
    gens.push_back({{"id", static_cast<int>(gens.size()) + 1},
                    {"bus", static_cast<int>(row[0])},
                    {"p_min", std::max(0.0, p_min)},
                    {"p_max", p_max},
                    {"energy_cost", energy_cost},
                    {"reserve_cost", opts.reserve_cost_ratio * energy_cost}});
  }
  j["generators"] = gens;

  json farms = json::array();
  for (size_t i = 0; i < opts.wind.size(); ++i) {
    const auto& w = opts.wind[i];
    farms.push_back({{"id", static_cast<int>(i) + 1},
                     {"bus", w.bus},
                     {"forecast", w.forecast_mw},
                     {"capacity", w.capacity_mw}});
  }
  j["wind_farms"] = farms;
  return j.dump(2) + "\n";
}

}  // namespace windsched
