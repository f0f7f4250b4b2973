#include "windsched/conic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace windsched {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

int ConicProgram::add_var(const std::string& name, double lb, double ub) {
  if (lb > ub) throw std::invalid_argument("variable '" + name + "': lb > ub");
  var_names_.push_back(name.empty() ? "x" + std::to_string(num_vars()) : name);
  lb_.push_back(lb);
  ub_.push_back(ub);
  obj_.conservativeResize(num_vars());
  obj_[num_vars() - 1] = 0.0;
  return num_vars() - 1;
}

void ConicProgram::set_bounds(int var, double lb, double ub) {
  if (lb > ub) throw std::invalid_argument("set_bounds: lb > ub");
  lb_[var] = lb;
  ub_[var] = ub;
}

void ConicProgram::add_objective(int var, double coef) { obj_[var] += coef; }

int ConicProgram::add_eq(LinExpr expr, double rhs, const std::string& name) {
  eq_rows_.push_back(std::move(expr));
  eq_rhs_.push_back(rhs);
  eq_names_.push_back(name.empty() ? "eq" + std::to_string(num_eq() - 1) : name);
  return num_eq() - 1;
}

int ConicProgram::add_ineq(LinExpr expr, double rhs, const std::string& name) {
  ineq_rows_.push_back(std::move(expr));
  ineq_rhs_.push_back(rhs);
  ineq_names_.push_back(name.empty() ? "ineq" + std::to_string(num_ineq() - 1)
                                     : name);
  return num_ineq() - 1;
}

int ConicProgram::add_soc(SocConstraint soc) {
  if (soc.norm_rows.empty())
    throw std::invalid_argument("soc '" + soc.name + "': needs >= 1 norm row");
  if (soc.norm_rows.size() != soc.norm_consts.size())
    throw std::invalid_argument("soc '" + soc.name + "': rows/consts mismatch");
  if (soc.name.empty()) soc.name = "soc" + std::to_string(num_soc());
  socs_.push_back(std::move(soc));
  return num_soc() - 1;
}

void ConicProgram::set_binary(int var) {
  if (var < 0 || var >= num_vars())
    throw std::invalid_argument("set_binary: variable out of range");
  binaries_.push_back(var);
}

double ConicProgram::eval_expr(const LinExpr& e, const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& t : e) v += t.coef * x[t.var];
  return v;
}

void ConicProgram::validate() const {
  auto check_expr = [&](const LinExpr& e, const std::string& where) {
    for (const auto& t : e) {
      if (t.var < 0 || t.var >= num_vars())
        throw std::invalid_argument(where + ": variable index out of range");
      if (!std::isfinite(t.coef))
        throw std::invalid_argument(where + ": non-finite coefficient");
    }
  };
  for (size_t r = 0; r < eq_rows_.size(); ++r) check_expr(eq_rows_[r], eq_names_[r]);
  for (size_t r = 0; r < ineq_rows_.size(); ++r)
    check_expr(ineq_rows_[r], ineq_names_[r]);
  for (const auto& s : socs_) {
    for (const auto& row : s.norm_rows) check_expr(row, s.name);
    check_expr(s.rhs_expr, s.name);
  }
  for (int b : binaries_)
    if (b < 0 || b >= num_vars())
      throw std::invalid_argument("binary index out of range");
}

void ConicProgram::dump(std::ostream& os) const {
  os << "# conic program, " << num_vars() << " vars, " << num_eq() << " eq, "
     << num_ineq() << " ineq, " << num_soc() << " soc\n";
  os << "minimize";
  for (int v = 0; v < num_vars(); ++v)
    if (obj_[v] != 0.0) os << " " << obj_[v] << "*" << var_names_[v];
  if (obj_const_ != 0.0) os << " + " << obj_const_;
  os << "\n";
  auto put_expr = [&](const LinExpr& e) {
    bool first = true;
    for (const auto& t : e) {
      if (!first) os << " + ";
      os << t.coef << "*" << var_names_[t.var];
      first = false;
    }
    if (first) os << "0";
  };
  for (int r = 0; r < num_eq(); ++r) {
    os << "eq " << eq_names_[r] << ": ";
    put_expr(eq_rows_[r]);
    os << " == " << eq_rhs_[r] << "\n";
  }
  for (int r = 0; r < num_ineq(); ++r) {
    os << "le " << ineq_names_[r] << ": ";
    put_expr(ineq_rows_[r]);
    os << " <= " << ineq_rhs_[r] << "\n";
  }
  for (const auto& s : socs_) {
    os << "soc " << s.name << ": ||";
    for (size_t i = 0; i < s.norm_rows.size(); ++i) {
      if (i) os << "; ";
      put_expr(s.norm_rows[i]);
      if (s.norm_consts[i] != 0.0) os << " + " << s.norm_consts[i];
    }
    os << "|| <= ";
    put_expr(s.rhs_expr);
    if (s.rhs_const != 0.0) os << " + " << s.rhs_const;
    os << "\n";
  }
  for (int v = 0; v < num_vars(); ++v)
    if (lb_[v] != -kInf || ub_[v] != kInf)
      os << "bound " << var_names_[v] << ": [" << lb_[v] << ", " << ub_[v] << "]\n";
  if (!binaries_.empty()) {
    os << "binary";
    for (int b : binaries_) os << " " << var_names_[b];
    os << "\n";
  }
}

double ResidualReport::max_violation() const {
  return std::max(std::max(eq_max, ineq_max), std::max(soc_max, bound_max));
}

ResidualReport check_solution(const ConicProgram& prog, const Eigen::VectorXd& x) {
  if (x.size() != prog.num_vars())
    throw std::invalid_argument("check_solution: primal length mismatch");
  ResidualReport rep;
  auto note = [&](const std::string& name, double viol, double& cls) {
    cls = std::max(cls, viol);
    rep.entries.push_back({name, viol});
    if (viol > rep.worst.violation) rep.worst = {name, viol};
  };
  for (int r = 0; r < prog.num_eq(); ++r)
    note(prog.eq_name(r),
         std::abs(prog.eval_expr(prog.eq_rows()[r], x) - prog.eq_rhs()[r]),
         rep.eq_max);
  for (int r = 0; r < prog.num_ineq(); ++r)
    note(prog.ineq_name(r),
         std::max(0.0, prog.eval_expr(prog.ineq_rows()[r], x) - prog.ineq_rhs()[r]),
         rep.ineq_max);
  for (const auto& s : prog.socs()) {
    double nrm = 0.0;
    for (size_t i = 0; i < s.norm_rows.size(); ++i) {
      const double v = prog.eval_expr(s.norm_rows[i], x) + s.norm_consts[i];
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    const double rhs = prog.eval_expr(s.rhs_expr, x) + s.rhs_const;
    note(s.name, std::max(0.0, nrm - rhs), rep.soc_max);
  }
  for (int v = 0; v < prog.num_vars(); ++v) {
    const double lo = prog.lower_bounds()[v], hi = prog.upper_bounds()[v];
    double viol = 0.0;
    if (x[v] < lo) viol = lo - x[v];
    if (x[v] > hi) viol = std::max(viol, x[v] - hi);
    if (viol > 0) note("bound:" + prog.var_name(v), viol, rep.bound_max);
  }
  return rep;
}

}  // namespace windsched
