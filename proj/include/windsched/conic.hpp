#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace windsched {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinTerm {
  int var = 0;
  double coef = 0.0;
};
using LinExpr = std::vector<LinTerm>;

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  NodeLimit,
  NumericalFailure
};
std::string to_string(SolveStatus s);

// Conic optimization problem:
//   min c'x
//   s.t.  eq rows:    a'x  = rhs
//         ineq rows:  a'x <= rhs
//         soc k:      ||A_k x + b_k|| <= c_k'x + d_k
//         lb <= x <= ub, x_i binary for i in binaries
struct SocConstraint {
  std::vector<LinExpr> norm_rows;
  std::vector<double> norm_consts;
  LinExpr rhs_expr;
  double rhs_const = 0.0;
  std::string name;
};

class ConicProgram {
 public:
  int add_var(const std::string& name, double lb = -kInf, double ub = kInf);
  void set_bounds(int var, double lb, double ub);
  void add_objective(int var, double coef);
  void add_objective_constant(double c) { obj_const_ += c; }
  int add_eq(LinExpr expr, double rhs, const std::string& name = "");
  int add_ineq(LinExpr expr, double rhs, const std::string& name = "");
  int add_soc(SocConstraint soc);
  void set_binary(int var);

  int num_vars() const { return static_cast<int>(lb_.size()); }
  int num_eq() const { return static_cast<int>(eq_rhs_.size()); }
  int num_ineq() const { return static_cast<int>(ineq_rhs_.size()); }
  int num_soc() const { return static_cast<int>(socs_.size()); }

  const std::vector<LinExpr>& eq_rows() const { return eq_rows_; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }
  const std::vector<LinExpr>& ineq_rows() const { return ineq_rows_; }
  const std::vector<double>& ineq_rhs() const { return ineq_rhs_; }
  const std::vector<SocConstraint>& socs() const { return socs_; }
  const Eigen::VectorXd& objective() const { return obj_; }
  double objective_constant() const { return obj_const_; }
  const std::vector<double>& lower_bounds() const { return lb_; }
  const std::vector<double>& upper_bounds() const { return ub_; }
  const std::vector<int>& binaries() const { return binaries_; }
  const std::string& var_name(int v) const { return var_names_[v]; }
  const std::string& eq_name(int r) const { return eq_names_[r]; }
  const std::string& ineq_name(int r) const { return ineq_names_[r]; }

  double eval_expr(const LinExpr& e, const Eigen::VectorXd& x) const;
  void validate() const;
  void dump(std::ostream& os) const;

 private:
  std::vector<std::string> var_names_;
  std::vector<double> lb_, ub_;
  Eigen::VectorXd obj_{0};
  double obj_const_ = 0.0;
  std::vector<LinExpr> eq_rows_, ineq_rows_;
  std::vector<double> eq_rhs_, ineq_rhs_;
  std::vector<std::string> eq_names_, ineq_names_;
  std::vector<SocConstraint> socs_;
  std::vector<int> binaries_;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd eq_duals;    // one per eq row
  Eigen::VectorXd ineq_duals;  // one per ineq row, >= 0
  int iterations = 0;
  long nodes = 0;
  double gap = 0.0;  // relative incumbent/bound gap after branch & bound
  double wall_seconds = 0.0;
  std::string message;
};

struct ResidualEntry {
  std::string name;
  double violation = 0.0;
};

struct ResidualReport {
  double eq_max = 0.0;
  double ineq_max = 0.0;
  double soc_max = 0.0;
  double bound_max = 0.0;
  ResidualEntry worst;
  std::vector<ResidualEntry> entries;  // one per constraint, all classes
  double max_violation() const;
};

ResidualReport check_solution(const ConicProgram& prog, const Eigen::VectorXd& x);

}  // namespace windsched
