#include "windsched/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace windsched {

using nlohmann::json;

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  if (j.contains("case")) case_path = j["case"].get<std::string>();
  if (j.contains("scenario_csv")) scenario_csv = j["scenario_csv"].get<std::string>();
  if (j.contains("wind_mean")) wind_mean = j["wind_mean"].get<double>();
  if (j.contains("wind_std")) {
    const auto& ws = j["wind_std"];
    if (ws.is_array()) {
      wind_std.resize(ws.size());
      for (size_t i = 0; i < ws.size(); ++i)
        wind_std[static_cast<int>(i)] = ws[i].get<double>();
    } else {
      wind_std.resize(1);
      wind_std[0] = ws.get<double>();
    }
  }
  if (j.contains("epsilon")) epsilon = j["epsilon"].get<double>();
  if (j.contains("gamma_rule")) gamma_rule = j["gamma_rule"].get<std::string>();
  if (j.contains("n_train")) n_train = j["n_train"].get<int>();
  if (j.contains("n_validate")) n_validate = j["n_validate"].get<int>();
  if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
  if (j.contains("validate_seed")) validate_seed = j["validate_seed"].get<std::uint64_t>();
  if (j.contains("wc0")) wc0 = j["wc0"].get<double>();
  if (j.contains("t_wc")) t_wc = j["t_wc"].get<double>();
  if (j.contains("lhs_extra")) lhs_extra = j["lhs_extra"].get<int>();
  if (j.contains("pwl_segments")) pwl_segments = j["pwl_segments"].get<int>();
  if (j.contains("gp_jitter")) gp_jitter = j["gp_jitter"].get<double>();
  if (j.contains("solver_tol")) solver_tol = j["solver_tol"].get<double>();
  if (j.contains("mip_gap")) mip_gap = j["mip_gap"].get<double>();
  if (j.contains("node_limit")) node_limit = j["node_limit"].get<long>();
  if (j.contains("fix_caps")) fix_caps = j["fix_caps"].get<std::string>();
  if (j.contains("correction")) correction = j["correction"].get<std::string>();
  if (j.contains("out_dir")) out_dir = j["out_dir"].get<std::string>();
  if (j.contains("dump_program")) dump_program = j["dump_program"].get<std::string>();
}

std::string RunConfig::to_json() const {
  json j;
  j["case"] = case_path;
  j["scenario_csv"] = scenario_csv;
  j["wind_mean"] = wind_mean;
  json ws = json::array();
  for (int i = 0; i < wind_std.size(); ++i) ws.push_back(wind_std[i]);
  j["wind_std"] = ws;
  j["epsilon"] = epsilon;
  j["gamma_rule"] = gamma_rule;
  j["n_train"] = n_train;
  j["n_validate"] = n_validate;
  j["seed"] = seed;
  j["validate_seed"] = validate_seed;
  j["wc0"] = wc0;
  j["t_wc"] = t_wc;
  j["lhs_extra"] = lhs_extra;
  j["pwl_segments"] = pwl_segments;
  j["gp_jitter"] = gp_jitter;
  j["solver_tol"] = solver_tol;
  j["mip_gap"] = mip_gap;
  j["node_limit"] = node_limit;
  j["fix_caps"] = fix_caps;
  j["correction"] = correction;
  j["out_dir"] = out_dir;
  j["dump_program"] = dump_program;
  return j.dump(1) + "\n";
}

void RunConfig::validate(int num_farms) const {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("config: epsilon must lie in (0, 0.5)");
  if (n_train * epsilon < 1.0)
    throw std::invalid_argument("config: n_train too small for epsilon");
  if (n_validate * epsilon < 1.0)
    throw std::invalid_argument("config: n_validate too small for epsilon");
  if (scenario_csv.empty()) {
    if (wind_std.size() != 1 && wind_std.size() != num_farms)
      throw std::invalid_argument(
          "config: wind_std must have one entry or one per farm");
    for (int i = 0; i < wind_std.size(); ++i)
      if (wind_std[i] < 0)
        throw std::invalid_argument("config: negative wind_std");
  }
  if (fix_caps != "free" && fix_caps != "max")
    throw std::invalid_argument("config: fix_caps must be 'free' or 'max'");
}

Eigen::VectorXd RunConfig::stds_for(int num_farms) const {
  if (wind_std.size() == num_farms) return wind_std;
  if (wind_std.size() == 1)
    return Eigen::VectorXd::Constant(num_farms, wind_std[0]);
  throw std::invalid_argument("config: wind_std size mismatch");
}

void write_manifest(const RunConfig& config, const std::string& command,
                    const std::string& out_dir, double wall_seconds) {
  std::filesystem::create_directories(out_dir);
  json j;
  j["tool"] = "windsched";
  j["version"] = 1;
  j["command"] = command;
  j["wall_seconds"] = wall_seconds;
  j["config"] = json::parse(config.to_json());
  std::ofstream out(out_dir + "/manifest_" + command + ".json");
  out << j.dump(1) << "\n";
}

}  // namespace windsched
