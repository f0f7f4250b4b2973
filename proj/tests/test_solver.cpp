#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "windsched/branch_bound.hpp"
#include "windsched/conic.hpp"
#include "windsched/ipm.hpp"

#include "oracle_lp.hpp"

using namespace windsched;

namespace {

// random bounded LP with n vars and m extra inequality rows
oracle::Lp random_lp(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> rhs(0.5, 3.0);
  oracle::Lp lp;
  lp.c.resize(n);
  for (int i = 0; i < n; ++i) lp.c[i] = coef(rng);
  lp.a.resize(m, n);
  lp.b.resize(m);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) lp.a(r, i) = coef(rng);
    lp.b[r] = rhs(rng);
  }
  lp.lb = Eigen::VectorXd::Constant(n, -1.5);
  lp.ub = Eigen::VectorXd::Constant(n, 1.5);
  return lp;
}

ConicProgram to_program(const oracle::Lp& lp) {
  ConicProgram prog;
  for (int i = 0; i < lp.c.size(); ++i) {
    const int v = prog.add_var("x" + std::to_string(i), lp.lb[i], lp.ub[i]);
    prog.add_objective(v, lp.c[i]);
  }
  for (int r = 0; r < lp.a.rows(); ++r) {
    LinExpr e;
    for (int i = 0; i < lp.c.size(); ++i)
      if (lp.a(r, i) != 0.0) e.push_back({static_cast<int>(i), lp.a(r, i)});
    prog.add_ineq(std::move(e), lp.b[r]);
  }
  return prog;
}

}  // namespace

TEST_CASE("fixed-argument cone: min t with ||(1,1)|| <= t") {
  ConicProgram prog;
  const int t = prog.add_var("t");
  prog.add_objective(t, 1.0);
  SocConstraint soc;
  soc.norm_rows = {{}, {}};
  soc.norm_consts = {1.0, 1.0};
  soc.rhs_expr = {{t, 1.0}};
  prog.add_soc(std::move(soc));
  const Solution sol = solve_convex(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("two lower bounds: min x s.t. x >= 3, x >= 5") {
  ConicProgram prog;
  const int x = prog.add_var("x");
  prog.add_objective(x, 1.0);
  prog.add_ineq({{x, -1.0}}, -3.0);
  prog.add_ineq({{x, -1.0}}, -5.0);
  const Solution sol = solve_convex(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("random bounded LPs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int solved = 0;
  while (solved < 10) {
    const int n = 2 + static_cast<int>(rng() % 5);  // 2..6 vars
    const int m = 2 + static_cast<int>(rng() % 7);
    const oracle::Lp lp = random_lp(n, m, rng);
    const auto expect = oracle::solve_by_vertex_enumeration(lp);
    const Solution sol = solve_convex(to_program(lp));
    if (!expect.has_value()) {
      CHECK(sol.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.objective - *expect) <=
          1e-6 * std::max(1.0, std::abs(*expect)));
    ++solved;
  }
}

TEST_CASE("infeasible and unbounded LPs are certified") {
  {
    ConicProgram prog;
    const int x = prog.add_var("x");
    prog.add_objective(x, 1.0);
    prog.add_ineq({{x, 1.0}}, -1.0);   // x <= -1
    prog.add_ineq({{x, -1.0}}, -1.0);  // x >= 1
    CHECK(solve_convex(prog).status == SolveStatus::Infeasible);
  }
  {
    ConicProgram prog;
    const int x = prog.add_var("x");
    prog.add_objective(x, 1.0);
    prog.add_ineq({{x, 1.0}}, 0.0);  // x <= 0, free below
    CHECK(solve_convex(prog).status == SolveStatus::Unbounded);
  }
}

TEST_CASE("equality-constrained projection onto a cone") {
  // min t s.t. ||(x - 3, y + 1)|| <= t, x + y = 1
  // distance from (3,-1) to the line x + y = 1 is |3 - 1 - 1| / sqrt(2)
  ConicProgram prog;
  const int x = prog.add_var("x");
  const int y = prog.add_var("y");
  const int t = prog.add_var("t");
  prog.add_objective(t, 1.0);
  prog.add_eq({{x, 1.0}, {y, 1.0}}, 1.0);
  SocConstraint soc;
  soc.norm_rows = {{{x, 1.0}}, {{y, 1.0}}};
  soc.norm_consts = {-3.0, 1.0};
  soc.rhs_expr = {{t, 1.0}};
  prog.add_soc(std::move(soc));
  const Solution sol = solve_convex(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("weak duality holds at the returned point") {
  // LP with only explicit rows so the dual objective is computable
  ConicProgram prog;
  const int x = prog.add_var("x");
  const int y = prog.add_var("y");
  prog.add_objective(x, 1.0);
  prog.add_objective(y, 2.0);
  prog.add_ineq({{x, -1.0}}, -1.0);            // x >= 1
  prog.add_ineq({{y, -1.0}}, -2.0);            // y >= 2
  prog.add_ineq({{x, 1.0}, {y, 1.0}}, 100.0);  // slack row
  const Solution sol = solve_convex(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const double dual_obj = -(sol.ineq_duals[0] * -1.0 + sol.ineq_duals[1] * -2.0 +
                            sol.ineq_duals[2] * 100.0);
  CHECK(sol.objective >= dual_obj - 1e-6 * std::max(1.0, std::abs(sol.objective)));
  CHECK(sol.objective == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(sol.ineq_duals[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.ineq_duals[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("determinism and scaling robustness") {
  std::mt19937_64 rng(99);
  const oracle::Lp lp = random_lp(4, 6, rng);
  const Solution a = solve_convex(to_program(lp));
  const Solution b = solve_convex(to_program(lp));
  REQUIRE(a.status == SolveStatus::Optimal);
  CHECK(a.objective == b.objective);  // identical deterministic path
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);

  oracle::Lp scaled = lp;
  scaled.c *= 1000.0;
  const Solution c = solve_convex(to_program(scaled));
  REQUIRE(c.status == SolveStatus::Optimal);
  CHECK((a.x - c.x).cwiseAbs().maxCoeff() <=
        1e-6 * std::max(1.0, a.x.cwiseAbs().maxCoeff()));
}

TEST_CASE("residual report names the violated cone") {
  ConicProgram prog;
  const int t = prog.add_var("t");
  prog.add_objective(t, 1.0);
  SocConstraint soc;
  soc.name = "my_cone";
  soc.norm_rows = {{}, {}};
  soc.norm_consts = {3.0, 4.0};
  soc.rhs_expr = {{t, 1.0}};
  prog.add_soc(std::move(soc));

  Eigen::VectorXd feasible(1), violating(1);
  feasible << 5.0;
  violating << 4.9;
  CHECK(check_solution(prog, feasible).max_violation() <= 1e-12);
  const auto rep = check_solution(prog, violating);
  CHECK(rep.soc_max == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(rep.worst.name == "my_cone");
}

TEST_CASE("residuals of solved problems stay small") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::Lp lp = random_lp(3 + trial % 3, 5, rng);
    ConicProgram prog = to_program(lp);
    const Solution sol = solve_convex(prog);
    if (sol.status != SolveStatus::Optimal) continue;
    CHECK(check_solution(prog, sol.x).max_violation() <= 1e-7);
  }
}

TEST_CASE("branch and bound: integral relaxation needs one node") {
  ConicProgram prog;
  const int z = prog.add_var("z", 0.0, 1.0);
  prog.add_objective(z, 1.0);  // optimum at z = 0, already integral
  prog.set_binary(z);
  const Solution sol = solve_misocp(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
  CHECK(sol.nodes == 1);
}

TEST_CASE("branch and bound: two-binary packing") {
  ConicProgram prog;
  const int a = prog.add_var("a", 0.0, 1.0);
  const int b = prog.add_var("b", 0.0, 1.0);
  prog.add_objective(a, -1.0);
  prog.add_objective(b, -1.0);
  prog.add_ineq({{a, 1.0}, {b, 1.0}}, 1.0);
  prog.set_binary(a);
  prog.set_binary(b);
  const Solution sol = solve_misocp(prog);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(sol.x[a] + sol.x[b] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("branch and bound matches exhaustive enumeration with a cone") {
  // knapsack-style selection with a norm penalty:
  //   min -v'z + 0.5 t   s.t.  ||diag(d) z|| <= t,  w'z <= W,  z binary
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const int nb = 6;
    Eigen::VectorXd value(nb), weight(nb), dscale(nb);
    for (int i = 0; i < nb; ++i) {
      value[i] = u(rng);
      weight[i] = u(rng);
      dscale[i] = u(rng);
    }
    const double budget = 0.5 * weight.sum();

    ConicProgram prog;
    std::vector<int> zvar(nb);
    for (int i = 0; i < nb; ++i) {
      zvar[i] = prog.add_var("z" + std::to_string(i), 0.0, 1.0);
      prog.set_binary(zvar[i]);
      prog.add_objective(zvar[i], -value[i]);
    }
    const int t = prog.add_var("t", 0.0, kInf);
    prog.add_objective(t, 0.5);
    LinExpr wrow;
    for (int i = 0; i < nb; ++i) wrow.push_back({zvar[i], weight[i]});
    prog.add_ineq(std::move(wrow), budget);
    SocConstraint soc;
    for (int i = 0; i < nb; ++i) {
      soc.norm_rows.push_back({{zvar[i], dscale[i]}});
      soc.norm_consts.push_back(0.0);
    }
    soc.rhs_expr = {{t, 1.0}};
    prog.add_soc(std::move(soc));

    // oracle: enumerate all 2^6 binary patterns
    double best = kInf;
    for (int mask = 0; mask < (1 << nb); ++mask) {
      double wsum = 0, vsum = 0, nrm2 = 0;
      for (int i = 0; i < nb; ++i)
        if (mask & (1 << i)) {
          wsum += weight[i];
          vsum += value[i];
          nrm2 += dscale[i] * dscale[i];
        }
      if (wsum > budget + 1e-12) continue;
      best = std::min(best, -vsum + 0.5 * std::sqrt(nrm2));
    }

    const Solution sol = solve_misocp(prog);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.objective - best) <= 1e-6 * std::max(1.0, std::abs(best)));
  }
}

TEST_CASE("branch and bound: infeasible binary system") {
  ConicProgram prog;
  const int a = prog.add_var("a", 0.0, 1.0);
  const int b = prog.add_var("b", 0.0, 1.0);
  prog.set_binary(a);
  prog.set_binary(b);
  prog.add_objective(a, 1.0);
  prog.add_eq({{a, 1.0}, {b, 1.0}}, 0.5);  // no 0/1 combination sums to 0.5
  const Solution sol = solve_misocp(prog);
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("program dump lists every block") {
  ConicProgram prog;
  const int x = prog.add_var("x", 0.0, 2.0);
  const int t = prog.add_var("t");
  prog.add_objective(x, 3.0);
  prog.add_eq({{x, 1.0}}, 1.0, "fix");
  prog.add_ineq({{x, 1.0}, {t, -1.0}}, 0.0, "link");
  SocConstraint soc;
  soc.name = "norm";
  soc.norm_rows = {{{x, 1.0}}};
  soc.norm_consts = {0.0};
  soc.rhs_expr = {{t, 1.0}};
  prog.add_soc(std::move(soc));
  prog.set_binary(x);
  std::ostringstream os;
  prog.dump(os);
  const std::string text = os.str();
  CHECK(text.find("minimize") != std::string::npos);
  CHECK(text.find("eq fix") != std::string::npos);
  CHECK(text.find("le link") != std::string::npos);
  CHECK(text.find("soc norm") != std::string::npos);
  CHECK(text.find("binary") != std::string::npos);
}
