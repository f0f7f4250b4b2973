#include "windsched/branch_bound.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <queue>
#include <set>
#include <vector>

namespace windsched {

namespace {

struct Node {
  long id = 0;
  double bound = 0.0;  // relaxation objective
  std::vector<std::pair<int, double>> fixings;  // (binary var, 0/1)
  Eigen::VectorXd relax_x;
  bool integral = false;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

}  // namespace

Solution solve_misocp(const ConicProgram& prog, const MisocpOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  const auto& binaries = prog.binaries();
  if (binaries.empty()) {
    Solution s = solve_convex(prog, opts.relaxation);
    s.nodes = 1;
    return s;
  }

  ConicProgram relax = prog;  // binaries become [0,1] box variables
  for (int b : binaries) {
    const double lo = std::max(0.0, prog.lower_bounds()[b]);
    const double hi = std::min(1.0, prog.upper_bounds()[b]);
    relax.set_bounds(b, lo, hi);
  }

  auto solve_with = [&](const std::vector<std::pair<int, double>>& fixings) {
    ConicProgram node_prog = relax;
    for (const auto& [var, val] : fixings) node_prog.set_bounds(var, val, val);
    return solve_convex(node_prog, opts.relaxation);
  };

  auto fractionality = [&](const Eigen::VectorXd& x, int& branch_var) {
    double worst = 0.0;
    branch_var = -1;
    for (int b : binaries) {
      const double f = std::abs(x[b] - std::round(x[b]));
      if (f > worst + 1e-15) {
        worst = f;
        branch_var = b;
      }
    }
    return worst;
  };

  Solution out;
  out.status = SolveStatus::Infeasible;
  long next_id = 0;
  long solved_nodes = 0;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  double incumbent_obj = kInf;
  Eigen::VectorXd incumbent_x;
  bool have_incumbent = false;
  double best_bound = -kInf;
  std::set<std::vector<int>> tried_patterns;

  auto try_incumbent = [&](double obj, const Eigen::VectorXd& x) {
    if (obj < incumbent_obj - 1e-12 * std::max(1.0, std::abs(obj))) {
      incumbent_obj = obj;
      incumbent_x = x;
      have_incumbent = true;
    }
  };

  // rounding heuristic: fix binaries at the rounded relaxation values and
  // re-solve the convex problem
  auto rounding_heuristic = [&](const Eigen::VectorXd& x) {
    std::vector<int> pattern(binaries.size());
    std::vector<std::pair<int, double>> fixings(binaries.size());
    for (size_t i = 0; i < binaries.size(); ++i) {
      pattern[i] = x[binaries[i]] >= 0.5 ? 1 : 0;
      fixings[i] = {binaries[i], static_cast<double>(pattern[i])};
    }
    if (!tried_patterns.insert(pattern).second) return;
    Solution s = solve_with(fixings);
    ++solved_nodes;
    if (s.status == SolveStatus::Optimal) try_incumbent(s.objective, s.x);
  };

  // root
  {
    Solution root = solve_convex(relax, opts.relaxation);
    ++solved_nodes;
    if (root.status == SolveStatus::Infeasible ||
        root.status == SolveStatus::Unbounded) {
      root.nodes = solved_nodes;
      root.wall_seconds = elapsed();
      return root;
    }
    if (root.status != SolveStatus::Optimal &&
        root.status != SolveStatus::IterationLimit) {
      root.nodes = solved_nodes;
      root.wall_seconds = elapsed();
      return root;
    }
    Node n;
    n.id = next_id++;
    n.bound = root.objective;
    n.relax_x = root.x;
    int bv;
    n.integral = fractionality(root.x, bv) <= opts.int_tol;
    queue.push(n);
    if (!n.integral) rounding_heuristic(root.x);
  }

  const double gap_tol = opts.gap;
  auto rel_gap = [&](double lo) {
    if (!have_incumbent) return kInf;
    return (incumbent_obj - lo) / std::max(1.0, std::abs(incumbent_obj));
  };

  bool hit_node_limit = false;
  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    best_bound = node.bound;
    if (have_incumbent && rel_gap(node.bound) <= gap_tol) {
      best_bound = node.bound;
      break;  // best-first: every remaining node is at least this bound
    }
    if (node.integral) {
      try_incumbent(node.bound, node.relax_x);
      continue;
    }
    if (solved_nodes >= opts.node_limit) {
      hit_node_limit = true;
      break;
    }

    int branch_var = -1;
    fractionality(node.relax_x, branch_var);
    if (branch_var < 0) {
      try_incumbent(node.bound, node.relax_x);
      continue;
    }
    for (double val : {0.0, 1.0}) {
      auto fixings = node.fixings;
      fixings.emplace_back(branch_var, val);
      Solution child = solve_with(fixings);
      ++solved_nodes;
      if (opts.verbose)
        std::cerr << "node " << next_id << " fix x" << branch_var << "=" << val
                  << " -> " << to_string(child.status) << " obj "
                  << child.objective << "\n";
      if (child.status == SolveStatus::Infeasible) continue;
      if (child.status != SolveStatus::Optimal &&
          child.status != SolveStatus::IterationLimit)
        continue;
      if (have_incumbent &&
          child.objective >=
              incumbent_obj - gap_tol * std::max(1.0, std::abs(incumbent_obj)))
        continue;  // bound-dominated
      Node c;
      c.id = next_id++;
      c.bound = child.objective;
      c.fixings = std::move(fixings);
      c.relax_x = child.x;
      int bv;
      c.integral = fractionality(child.x, bv) <= opts.int_tol;
      if (!c.integral && !have_incumbent) rounding_heuristic(child.x);
      queue.push(c);
    }
  }

  if (!have_incumbent) {
    out.status = hit_node_limit ? SolveStatus::NodeLimit : SolveStatus::Infeasible;
    out.message = hit_node_limit ? "node limit reached without incumbent"
                                 : "no feasible binary assignment";
    out.nodes = solved_nodes;
    out.wall_seconds = elapsed();
    return out;
  }

  double final_bound = best_bound;
  if (!queue.empty()) final_bound = std::min(final_bound, queue.top().bound);
  out.status = hit_node_limit ? SolveStatus::NodeLimit : SolveStatus::Optimal;
  out.x = incumbent_x;
  out.objective = incumbent_obj;
  out.gap = queue.empty() && !hit_node_limit
                ? 0.0
                : std::max(0.0, rel_gap(final_bound));
  out.nodes = solved_nodes;
  out.eq_duals = Eigen::VectorXd::Zero(prog.num_eq());
  out.ineq_duals = Eigen::VectorXd::Zero(prog.num_ineq());
  out.wall_seconds = elapsed();
  return out;
}

}  // namespace windsched
