#pragma once

#include "windsched/conic.hpp"
#include "windsched/ipm.hpp"

namespace windsched {

struct MisocpOptions {
  SolveOptions relaxation;
  double gap = 1e-6;        // relative optimality gap target
  long node_limit = 100000;
  double int_tol = 1e-6;
  bool verbose = false;
};

// Best-first branch and bound over the declared binary variables; nodes are
// convex relaxations solved from scratch. Deterministic: branching picks the
// most fractional binary (ties to the lowest index), the queue orders by
// (bound, node id).
Solution solve_misocp(const ConicProgram& prog, const MisocpOptions& opts = {});

}  // namespace windsched
