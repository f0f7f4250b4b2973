#include <doctest.h>

#include <random>

#include "windsched/grid.hpp"
#include "windsched/scenarios.hpp"

using namespace windsched;

namespace {

GridCase two_bus() {
  return GridCase({{1, 0.0}, {2, 100.0}}, {{1, 1, 2, 0.1, 500.0}},
                  {{1, 1, 0.0, 400.0, 10.0, 2.0}}, {{1, 2, 50.0, 100.0}}, 1,
                  100.0);
}

GridCase three_bus_ring() {
  return GridCase({{1, 0.0}, {2, 0.0}, {3, 0.0}},
                  {{1, 1, 2, 0.1, 500.0}, {2, 2, 3, 0.1, 500.0}, {3, 1, 3, 0.1, 500.0}},
                  {{1, 1, 0.0, 100.0, 10.0, 2.0}}, {}, 1, 100.0);
}

}  // namespace

TEST_CASE("pjm5 case loads with the documented shape") {
  const GridCase grid = load_case("cases/pjm5.json");
  CHECK(grid.num_buses() == 5);
  CHECK(grid.num_lines() == 6);
  CHECK(grid.num_generators() == 5);
  CHECK(grid.num_wind_farms() == 1);
  CHECK(grid.wind_farms()[0].bus == 2);
  CHECK(grid.wind_farms()[0].forecast_mw == doctest::Approx(200.0));
  CHECK(grid.lines()[5].limit_mw == doctest::Approx(240.0));
  CHECK(grid.generators()[1].p_max_mw == doctest::Approx(170.0));
}

TEST_CASE("case validation reports field paths") {
  CHECK_THROWS_WITH_AS(
      parse_case_json(R"({"slack_bus":[1,2],"buses":[{"id":1,"demand":0}],
        "lines":[],"generators":[],"wind_farms":[]})"),
      doctest::Contains("multiple slack"), CaseError);

  // disconnected network
  CHECK_THROWS_WITH_AS(
      GridCase({{1, 0.0}, {2, 0.0}, {3, 0.0}}, {{1, 1, 2, 0.1, 100.0}},
               {{1, 1, 0.0, 100.0, 10.0, 2.0}}, {}, 1, 100.0),
      doctest::Contains("disconnected"), CaseError);

  // nonpositive reactance
  CHECK_THROWS_AS(GridCase({{1, 0.0}, {2, 0.0}}, {{1, 1, 2, -0.1, 100.0}},
                           {{1, 1, 0.0, 100.0, 10.0, 2.0}}, {}, 1, 100.0),
                  CaseError);

  // forecast above capacity
  CHECK_THROWS_AS(GridCase({{1, 0.0}, {2, 0.0}}, {{1, 1, 2, 0.1, 100.0}},
                           {{1, 1, 0.0, 100.0, 10.0, 2.0}},
                           {{1, 2, 300.0, 100.0}}, 1, 100.0),
                  CaseError);

  CHECK_THROWS_AS(load_case("cases/does_not_exist.json"), CaseError);
}

TEST_CASE("ptdf on a single path sends injections to the slack") {
  const PtdfMatrix ptdf = compute_ptdf(two_bus());
  CHECK(ptdf.factors(0, 0) == doctest::Approx(0.0));
  CHECK(ptdf.factors(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("ptdf slack column is zero") {
  const GridCase grid = load_case("cases/pjm5.json");
  const PtdfMatrix ptdf = compute_ptdf(grid);
  const int slack = grid.slack_index();
  for (int l = 0; l < grid.num_lines(); ++l)
    CHECK(ptdf.factors(l, slack) == doctest::Approx(0.0));
}

TEST_CASE("ptdf splits a ring injection by path susceptance") {
  // oracle: direct DC solve of the reduced system
  const GridCase grid = three_bus_ring();
  const PtdfMatrix ptdf = compute_ptdf(grid);

  // independent oracle: angles from a hand-assembled reduced matrix
  Eigen::Matrix2d b_red;
  b_red << 20.0, -10.0, -10.0, 20.0;  // buses 2,3; b = 1/0.1 per line
  Eigen::Vector2d inj(1.0, 0.0);      // 1 MW at bus 2
  const Eigen::Vector2d theta = b_red.fullPivLu().solve(inj);
  const double f12 = (0.0 - theta[0]) / 0.1;  // line 1-2
  const double f23 = (theta[0] - theta[1]) / 0.1;
  const double f13 = (0.0 - theta[1]) / 0.1;

  CHECK(ptdf.factors(0, 1) == doctest::Approx(f12).epsilon(1e-12));
  CHECK(ptdf.factors(1, 1) == doctest::Approx(f23).epsilon(1e-12));
  CHECK(ptdf.factors(2, 1) == doctest::Approx(f13).epsilon(1e-12));
  CHECK(std::abs(ptdf.factors(0, 1)) == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(ptdf.factors(1, 1)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ptdf magnitudes stay within one on bundled cases") {
  const GridCase grid = load_case("cases/pjm5.json");
  const PtdfMatrix ptdf = compute_ptdf(grid);
  CHECK(ptdf.factors.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
}

TEST_CASE("participation factors are capacity shares") {
  {
    GridCase g({{1, 0.0}, {2, 0.0}}, {{1, 1, 2, 0.1, 100.0}},
               {{1, 1, 0.0, 100.0, 10.0, 2.0}, {2, 2, 0.0, 300.0, 12.0, 2.4}},
               {}, 1, 100.0);
    const Eigen::VectorXd beta = participation_factors(g);
    CHECK(beta[0] == doctest::Approx(0.25));
    CHECK(beta[1] == doctest::Approx(0.75));
  }
  {
    const Eigen::VectorXd beta = participation_factors(two_bus());
    CHECK(beta.size() == 1);
    CHECK(beta[0] == doctest::Approx(1.0));
  }
  {
    GridCase g({{1, 0.0}, {2, 0.0}}, {{1, 1, 2, 0.1, 100.0}},
               {{1, 1, 0.0, 170.0, 10.0, 2.0},
                {2, 1, 0.0, 520.0, 10.0, 2.0},
                {3, 2, 0.0, 200.0, 10.0, 2.0},
                {4, 2, 0.0, 600.0, 10.0, 2.0}},
               {}, 1, 100.0);
    const Eigen::VectorXd beta = participation_factors(g);
    const double total = 170.0 + 520.0 + 200.0 + 600.0;
    CHECK(beta[0] == doctest::Approx(170.0 / total).epsilon(1e-14));
    CHECK(beta[1] == doctest::Approx(520.0 / total).epsilon(1e-14));
    CHECK(beta[2] == doctest::Approx(200.0 / total).epsilon(1e-14));
    CHECK(beta[3] == doctest::Approx(600.0 / total).epsilon(1e-14));
    CHECK(beta[0] == doctest::Approx(0.1141).epsilon(1e-3));
    CHECK(beta[3] == doctest::Approx(0.4027).epsilon(1e-3));
    CHECK(beta.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  {
    GridCase g({{1, 0.0}, {2, 0.0}}, {{1, 1, 2, 0.1, 100.0}},
               {{1, 1, 0.0, 0.0, 10.0, 2.0}}, {}, 1, 100.0);
    CHECK_THROWS_WITH_AS(participation_factors(g),
                         doctest::Contains("no balancing capacity"), CaseError);
  }
}

TEST_CASE("wind-to-flow sensitivity cancels for co-located response") {
  // wind farm at the only generator's bus
  GridCase g({{1, 0.0}, {2, 100.0}}, {{1, 1, 2, 0.1, 500.0}},
             {{1, 2, 0.0, 400.0, 10.0, 2.0}}, {{1, 2, 50.0, 100.0}}, 1, 100.0);
  const PtdfMatrix ptdf = compute_ptdf(g);
  const Sensitivities sens = compute_sensitivities(g, ptdf);
  CHECK(sens.wind_to_flow.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("wind-to-flow sensitivity with one responding generator") {
  const GridCase grid = load_case("cases/pjm5.json");
  const PtdfMatrix ptdf = compute_ptdf(grid);
  // all response concentrated on generator 5 (bus 5)
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(5);
  beta[4] = 1.0;
  const Eigen::MatrixXd k = wind_flow_sensitivity(ptdf, beta, grid);
  const int wind_col = grid.bus_index(2);
  const int gen_col = grid.bus_index(5);
  for (int l = 0; l < grid.num_lines(); ++l)
    CHECK(k(l, 0) ==
          doctest::Approx(ptdf.factors(l, wind_col) - ptdf.factors(l, gen_col))
              .epsilon(1e-12));
}

TEST_CASE("pjm wind-to-flow column matches direct recomputation") {
  const GridCase grid = load_case("cases/pjm5.json");
  const PtdfMatrix ptdf = compute_ptdf(grid);
  const Sensitivities sens = compute_sensitivities(grid, ptdf);
  // independent matrix arithmetic
  Eigen::VectorXd resp = Eigen::VectorXd::Zero(grid.num_lines());
  for (int g = 0; g < grid.num_generators(); ++g)
    resp += sens.beta[g] *
            ptdf.factors.col(grid.bus_index(grid.generators()[g].bus));
  for (int l = 0; l < grid.num_lines(); ++l)
    CHECK(sens.wind_to_flow(l, 0) ==
          doctest::Approx(ptdf.factors(l, grid.bus_index(2)) - resp[l])
              .epsilon(1e-12));
}

TEST_CASE("combined wind-plus-response injection equals sensitivity flows") {
  const GridCase grid = load_case("cases/pjm5.json");
  const PtdfMatrix ptdf = compute_ptdf(grid);
  const Sensitivities sens = compute_sensitivities(grid, ptdf);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-300.0, 300.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd dw(grid.num_wind_farms());
    for (int f = 0; f < dw.size(); ++f) dw[f] = dist(rng);
    // bus injections: deviations at wind buses, balancing response at gens
    Eigen::VectorXd inj = Eigen::VectorXd::Zero(grid.num_buses());
    for (int f = 0; f < dw.size(); ++f)
      inj[grid.bus_index(grid.wind_farms()[f].bus)] += dw[f];
    for (int g = 0; g < grid.num_generators(); ++g)
      inj[grid.bus_index(grid.generators()[g].bus)] -= sens.beta[g] * dw.sum();
    const Eigen::VectorXd by_ptdf = ptdf.factors * inj;
    const Eigen::VectorXd by_k = sens.wind_to_flow * dw;
    CHECK((by_ptdf - by_k).lpNorm<Eigen::Infinity>() <= 1e-9);
  }
}
