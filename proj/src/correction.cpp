#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "windsched/model.hpp"

namespace windsched {

DispatchSolution correct(const GridCase& grid, const PtdfMatrix& ptdf,
                         const Sensitivities& sens, const ScenarioSet& set,
                         const SurrogateBundle& bundle,
                         const DispatchSolution& m0_solution, double epsilon,
                         CorrectionMode mode, const SolveOptions& opts) {
  const int nf = grid.num_wind_farms();
  const int nl = grid.num_lines();
  const int ng = grid.num_generators();
  const Eigen::VectorXd caps = m0_solution.caps;
  if (caps.size() != nf)
    throw std::invalid_argument("correct: solution/case farm mismatch");

  Eigen::VectorXd mean(nf), stddev(nf);
  Eigen::VectorXd kappa(2 * nl + 2 * ng);

  switch (mode) {
    case CorrectionMode::Empirical: {
      // exact recomputation at the fixed caps from the scenario data
      Eigen::MatrixXd one_point(1, nf);
      one_point.row(0) = caps;
      const KappaSamples ks =
          gen_kappa_samples(set, grid, sens, one_point, bundle.gamma0, epsilon);
      kappa = ks.targets.row(0);
      const TruncatedMoments mom =
          truncated_stats(set, caps, grid.wind_forecasts());
      mean = mom.mean;
      stddev = mom.stddev;
      break;
    }
    case CorrectionMode::SeGp: {
      for (int f = 0; f < nf; ++f) {
        mean[f] = bundle.farms[f].mean_gp.predict1(caps[f]);
        stddev[f] = std::max(0.0, bundle.farms[f].std_gp.predict1(caps[f]));
      }
      // SE-kernel regression of the compensation samples; hyperparameters are
      // searched once per constraint kind and reused across its members
      double shared_len = 0.0, shared_amp = 0.0;
      for (int c = 0; c < kappa.size(); ++c) {
        GpFitOptions o;
        const bool lead = (c == 0 || c == nl || c == 2 * nl || c == 2 * nl + ng);
        if (!lead) {
          o.fixed_length = shared_len;
          o.fixed_amplitude = shared_amp;
        }
        const GpModel gp =
            gp_fit(bundle.kappa_inputs, bundle.kappa_targets.col(c),
                   KernelKind::SquaredExponential, o);
        if (lead) {
          shared_len = gp.length;
          shared_amp = gp.amplitude;
        }
        kappa[c] = gp.predict(caps);
      }
      break;
    }
    case CorrectionMode::Surrogate: {
      // the optimizer's own constants: PWL moments and affine compensation
      for (int f = 0; f < nf; ++f) {
        mean[f] = bundle.farms[f].mean_pwl(caps[f]);
        stddev[f] = bundle.farms[f].std_pwl(caps[f]);
      }
      kappa = bundle.kappa_coeffs * caps;
      break;
    }
  }

  ScheduleProblem sp = build_fixed_margins(grid, ptdf, sens, mean, stddev,
                                           kappa, epsilon, bundle.gamma0,
                                           "correction");
  sp.fixed_caps = caps;

  Solution sol = solve_convex(sp.prog, opts);
  if (sol.status != SolveStatus::Optimal) {
    std::ostringstream msg;
    msg << "correction LP " << to_string(sol.status);
    if (sol.status == SolveStatus::Infeasible) {
      // surface the tightest margins to hint at surrogate underestimation
      std::vector<std::pair<double, std::string>> worst;
      for (size_t i = 0; i < bundle.constraint_ids.size(); ++i)
        worst.emplace_back(sp.const_margin[static_cast<int>(i)],
                           bundle.constraint_ids[i].str());
      std::sort(worst.rbegin(), worst.rend());
      msg << "; largest margins:";
      for (size_t i = 0; i < std::min<size_t>(3, worst.size()); ++i)
        msg << " " << worst[i].second << "=" << worst[i].first;
      msg << "; consider more pwl segments";
    }
    throw std::runtime_error(msg.str());
  }

  DispatchSolution out = extract_solution(sp, grid, sens, sol);
  out.method = "m0";
  out.stage = "corrected";
  return out;
}

}  // namespace windsched
