#pragma once

// Test-only linear programming oracle: enumerates basic feasible points of
// { x : A x <= b, lb <= x <= ub } by solving every n-subset of active
// constraints, independent of the interior-point implementation.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

struct Lp {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;  // rows: a_i' x <= b_i
  Eigen::VectorXd b;
  Eigen::VectorXd lb, ub;
};

// returns the optimal value, or nullopt when no vertex is feasible
inline std::optional<double> solve_by_vertex_enumeration(const Lp& lp) {
  const int n = static_cast<int>(lp.c.size());
  // stack all constraints as rows (inequalities + bounds)
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < lp.a.rows(); ++i) {
    rows.push_back(lp.a.row(i));
    rhs.push_back(lp.b[i]);
  }
  for (int v = 0; v < n; ++v) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[v] = 1.0;
    rows.push_back(e);
    rhs.push_back(lp.ub[v]);
    rows.push_back(-e);
    rhs.push_back(-lp.lb[v]);
  }
  const int m = static_cast<int>(rows.size());

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<int> pick(n);
  // iterate all n-combinations of constraint indices
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  auto advance = [&]() {
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) return false;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  do {
    Eigen::MatrixXd basis(n, n);
    Eigen::VectorXd base_rhs(n);
    for (int i = 0; i < n; ++i) {
      basis.row(i) = rows[idx[i]];
      base_rhs[i] = rhs[idx[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(base_rhs);
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i)
      if (rows[i].dot(x) > rhs[i] + 1e-7) feasible = false;
    if (!feasible) continue;
    found = true;
    best = std::min(best, lp.c.dot(x));
  } while (advance());

  if (!found) return std::nullopt;
  return best;
}

}  // namespace oracle
