#pragma once

#include "windsched/conic.hpp"

namespace windsched {

struct SolveOptions {
  double tol = 1e-8;      // relative duality gap target
  double feastol = 1e-8;  // primal/dual feasibility target
  int max_iter = 100;
  bool verbose = false;
};

// Convex solve (binary markers ignored): primal-dual interior-point method on
// the homogeneous self-dual embedding with Nesterov-Todd scaling and Mehrotra
// predictor-corrector steps. Dense factorization of the reduced KKT system.
Solution solve_convex(const ConicProgram& prog, const SolveOptions& opts = {});

}  // namespace windsched
