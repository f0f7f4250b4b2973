#pragma once

#include <string>
#include <vector>

namespace windsched {

// Raw MATPOWER-style numeric tables (mpc.bus / mpc.gen / mpc.branch /
// mpc.gencost) as parsed from a .m case file.
struct MatpowerCase {
  double base_mva = 100.0;
  std::vector<std::vector<double>> bus;
  std::vector<std::vector<double>> gen;
  std::vector<std::vector<double>> branch;
  std::vector<std::vector<double>> gencost;
};

MatpowerCase parse_matpower(const std::string& path);

struct WindPlacement {
  int bus = 0;
  double forecast_mw = 0.0;
  double capacity_mw = 0.0;
};

struct ImportOptions {
  std::vector<WindPlacement> wind;
  int slack_bus = 0;              // 0: take the type-3 bus from the file
  double reserve_cost_ratio = 0.2;  // c_r = ratio * c_e
  double default_limit_mw = 10000;  // replaces rateA == 0 entries
};

// Converts parsed MATPOWER tables to the native case JSON text. Linear energy
// costs come from the gencost table: polynomial costs are linearized at half
// of Pmax, piecewise costs use the average slope.
std::string matpower_to_case_json(const MatpowerCase& mpc,
                                  const ImportOptions& opts);

}  // namespace windsched
