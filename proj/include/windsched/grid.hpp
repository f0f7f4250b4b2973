#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace windsched {

// Input/validation failure carrying the offending field path (e.g. "lines[3].reactance").
struct CaseError : std::runtime_error {
  CaseError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_path(field) {}
  std::string field_path;
};

struct Bus {
  int id = 0;
  double demand_mw = 0.0;
};

struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double reactance_pu = 0.0;  // on system base
  double limit_mw = 0.0;
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double energy_cost = 0.0;   // $/MWh
  double reserve_cost = 0.0;  // $/MW
};

struct WindFarm {
  int id = 0;
  int bus = 0;
  double forecast_mw = 0.0;
  double capacity_mw = 0.0;
};

// Validated network case. Immutable after construction.
class GridCase {
 public:
  GridCase(std::vector<Bus> buses, std::vector<Line> lines,
           std::vector<Generator> generators, std::vector<WindFarm> wind_farms,
           int slack_bus, double base_mva);

  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<WindFarm>& wind_farms() const { return wind_farms_; }
  int slack_bus() const { return slack_bus_; }
  double base_mva() const { return base_mva_; }

  int num_buses() const { return static_cast<int>(buses_.size()); }
  int num_lines() const { return static_cast<int>(lines_.size()); }
  int num_generators() const { return static_cast<int>(generators_.size()); }
  int num_wind_farms() const { return static_cast<int>(wind_farms_.size()); }

  // Dense index of a bus id; throws CaseError for unknown ids.
  int bus_index(int bus_id) const;
  int slack_index() const { return bus_index(slack_bus_); }

  double total_demand() const;
  double total_wind_forecast() const;

  Eigen::VectorXd wind_forecasts() const;
  Eigen::VectorXd wind_capacities() const;

 private:
  void validate() const;

  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::vector<Generator> generators_;
  std::vector<WindFarm> wind_farms_;
  int slack_bus_;
  double base_mva_;
  std::vector<std::pair<int, int>> bus_index_;  // sorted (id, dense index)
};

GridCase load_case(const std::string& path);
GridCase parse_case_json(const std::string& text, const std::string& origin = "<string>");

// DC power transfer distribution factors: rows = lines, columns = buses
// (dense bus indices), slack column identically zero. Sign convention:
// positive flow runs from-bus -> to-bus.
struct PtdfMatrix {
  Eigen::MatrixXd factors;  // lines x buses
  int slack_index = 0;
};

PtdfMatrix compute_ptdf(const GridCase& grid);

// beta: per-generator share of the system imbalance; wind_to_flow: net line
// flow sensitivity to a wind farm's deviation, combining the injection itself
// and the generators' balancing response.
struct Sensitivities {
  Eigen::VectorXd beta;          // generators
  Eigen::MatrixXd wind_to_flow;  // lines x wind farms
};

Eigen::VectorXd participation_factors(const GridCase& grid);

Eigen::MatrixXd wind_flow_sensitivity(const PtdfMatrix& ptdf,
                                      const Eigen::VectorXd& beta,
                                      const GridCase& grid);

Sensitivities compute_sensitivities(const GridCase& grid, const PtdfMatrix& ptdf);

}  // namespace windsched
