#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace windsched {

// All pipeline knobs, mirrored 1:1 between CLI flags and the JSON config
// file; CLI flags win on conflict.
struct RunConfig {
  std::string case_path;
  std::string scenario_csv;  // empty: Gaussian sampling
  double wind_mean = 0.0;
  Eigen::VectorXd wind_std;  // per farm; a single entry broadcasts
  double epsilon = 0.05;
  std::string gamma_rule = "gaussian";
  int n_train = 10000;
  int n_validate = 10000;
  std::uint64_t seed = 1;
  std::uint64_t validate_seed = 2;
  double wc0 = 0.0;   // 0: forecast
  double t_wc = 0.0;  // 0: headroom / 20
  int lhs_extra = 64;
  int pwl_segments = 10;
  double gp_jitter = 1e-10;  // relative start jitter
  double solver_tol = 1e-8;
  double mip_gap = 1e-6;
  long node_limit = 100000;
  std::string fix_caps = "free";  // free | max
  std::string correction = "empirical";
  std::string out_dir = "out";
  std::string dump_program;  // optional path

  void load_file(const std::string& path);  // merge keys from a JSON config
  std::string to_json() const;              // manifest snapshot
  void validate(int num_farms) const;
  Eigen::VectorXd stds_for(int num_farms) const;
};

void write_manifest(const RunConfig& config, const std::string& command,
                    const std::string& out_dir, double wall_seconds);

}  // namespace windsched
