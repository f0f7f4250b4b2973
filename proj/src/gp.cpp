#include "windsched/gp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace windsched {

namespace {

Eigen::MatrixXd gram_matrix(KernelKind kind, double amplitude, double length,
                            const Eigen::MatrixXd& x) {
  const int k = static_cast<int>(x.rows());
  Eigen::MatrixXd g(k, k);
  if (kind == KernelKind::Linear) {
    g = x * x.transpose() / (length * length);
    return g;
  }
  const double inv2l2 = 1.0 / (2.0 * length * length);
  const double a2 = amplitude * amplitude;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      const double d2 = (x.row(i) - x.row(j)).squaredNorm();
      g(i, j) = g(j, i) = a2 * std::exp(-d2 * inv2l2);
    }
  return g;
}

struct FitResult {
  bool ok = false;
  Eigen::VectorXd weights;
  double log_ml = -std::numeric_limits<double>::infinity();
  double jitter = 0.0;
};

// solve (Gram + jitter I) w = y, escalating jitter on factorization failure
FitResult solve_weights(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y,
                        const GpFitOptions& opts) {
  const int k = static_cast<int>(gram.rows());
  const double trace_scale = std::max(gram.trace() / k, 1e-300);
  FitResult out;
  double jitter = opts.jitter_start_scale * trace_scale;
  const double jitter_max = opts.jitter_max_scale * trace_scale;
  while (true) {
    Eigen::MatrixXd m = gram;
    m.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      // guards against semi-definite Grams that LLT accepts with ~0 pivots
      const Eigen::VectorXd l_diag = llt.matrixLLT().diagonal();
      if (l_diag.minCoeff() > std::sqrt(trace_scale) * 1e-12) {
        out.ok = true;
        out.weights = llt.solve(y);
        out.jitter = jitter;
        double logdet = 0.0;
        for (int i = 0; i < k; ++i) logdet += std::log(l_diag[i]);
        out.log_ml = -0.5 * y.dot(out.weights) - logdet -
                     0.5 * k * std::log(2.0 * M_PI);
        return out;
      }
    }
    jitter = (jitter == 0.0) ? opts.jitter_start_scale * trace_scale : jitter * 10.0;
    if (jitter > jitter_max) return out;  // ok == false
  }
}

double stddev(const Eigen::VectorXd& y) {
  const double mean = y.mean();
  return std::sqrt((y.array() - mean).square().sum() /
                   std::max<int>(1, static_cast<int>(y.size()) - 1));
}

}  // namespace

double kernel_eval(KernelKind kind, double amplitude, double length,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime) {
  if (length <= 0) throw std::domain_error("kernel_eval: length scale must be > 0");
  if (kind == KernelKind::Linear) return x.dot(x_prime) / (length * length);
  return amplitude * amplitude *
         std::exp(-(x - x_prime).squaredNorm() / (2.0 * length * length));
}

double GpModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != inputs.cols())
    throw std::invalid_argument("gp predict: input dimension mismatch");
  if (kind == KernelKind::Linear)
    return (inputs * x).dot(weights) / (length * length);
  double acc = 0.0;
  const double inv2l2 = 1.0 / (2.0 * length * length);
  const double a2 = amplitude * amplitude;
  for (int k = 0; k < inputs.rows(); ++k)
    acc += weights[k] * a2 *
           std::exp(-(inputs.row(k).transpose() - x).squaredNorm() * inv2l2);
  return acc;
}

double GpModel::predict1(double x) const {
  Eigen::VectorXd v(1);
  v[0] = x;
  return predict(v);
}

Eigen::VectorXd GpModel::linear_coefficients() const {
  if (kind != KernelKind::Linear)
    throw std::logic_error("linear_coefficients: not a linear-kernel model");
  return inputs.transpose() * weights / (length * length);
}

bool GpModel::in_training_hull(const Eigen::VectorXd& x) const {
  for (int c = 0; c < inputs.cols(); ++c)
    if (x[c] < inputs.col(c).minCoeff() - 1e-12 ||
        x[c] > inputs.col(c).maxCoeff() + 1e-12)
      return false;
  return true;
}

GpModel gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
               KernelKind kind, const GpFitOptions& opts) {
  const int k = static_cast<int>(inputs.rows());
  if (k < 2) throw std::invalid_argument("gp_fit: need at least 2 training points");
  if (inputs.rows() != targets.size())
    throw std::invalid_argument("gp_fit: inputs/targets size mismatch");
  if (!targets.allFinite()) throw std::invalid_argument("gp_fit: non-finite targets");

  GpModel model;
  model.kind = kind;
  model.inputs = inputs;

  if (targets.lpNorm<Eigen::Infinity>() == 0.0) {
    model.weights = Eigen::VectorXd::Zero(k);
    model.length = 1.0;
    return model;
  }

  // data/input scales anchor the hyperparameter grids
  double input_scale = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int c = 0; c < inputs.cols(); ++c) {
    const double w = inputs.col(c).maxCoeff() - inputs.col(c).minCoeff();
    input_scale = std::max(input_scale, w);
  }
  if (input_scale <= 0) input_scale = std::max(1.0, inputs.cwiseAbs().maxCoeff());
  for (int i = 1; i < k && inputs.cols() == 1; ++i) {
    Eigen::VectorXd col = inputs.col(0);
    std::sort(col.data(), col.data() + k);
    for (int j = 1; j < k; ++j)
      if (col[j] - col[j - 1] > 1e-12) min_gap = std::min(min_gap, col[j] - col[j - 1]);
    break;
  }
  if (!std::isfinite(min_gap)) min_gap = input_scale / std::max(1, k - 1);
  const double amp_anchor =
      std::max(stddev(targets), 0.1 * targets.cwiseAbs().maxCoeff());

  auto logspace = [](double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
      v[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i /
                      std::max(1, n - 1));
    return v;
  };

  std::vector<double> lengths, amplitudes;
  if (kind == KernelKind::Linear) {
    lengths = opts.optimize_hyper && opts.fixed_length <= 0
                  ? logspace(0.1 * input_scale, 10.0 * input_scale, opts.amplitude_grid)
                  : std::vector<double>{opts.fixed_length > 0 ? opts.fixed_length
                                                              : input_scale};
    amplitudes = {1.0};
  } else {
    lengths = opts.optimize_hyper && opts.fixed_length <= 0
                  ? logspace(std::max(min_gap, 1e-9 * input_scale), 4.0 * input_scale,
                             opts.length_grid)
                  : std::vector<double>{opts.fixed_length > 0 ? opts.fixed_length
                                                              : input_scale};
    amplitudes = opts.optimize_hyper && opts.fixed_amplitude <= 0
                     ? logspace(0.25 * amp_anchor, 4.0 * amp_anchor, opts.amplitude_grid)
                     : std::vector<double>{opts.fixed_amplitude > 0
                                               ? opts.fixed_amplitude
                                               : amp_anchor};
  }

  double best_ml = -std::numeric_limits<double>::infinity();
  double best_len = lengths.front(), best_amp = amplitudes.front();
  FitResult best_fit;
  auto consider = [&](double len, double amp) {
    const FitResult r = solve_weights(gram_matrix(kind, amp, len, inputs), targets, opts);
    if (r.ok && r.log_ml > best_ml) {
      best_ml = r.log_ml;
      best_len = len;
      best_amp = amp;
      best_fit = r;
    }
  };
  for (double len : lengths)
    for (double amp : amplitudes) consider(len, amp);

  if (!best_fit.ok)
    throw std::runtime_error(
        "gp_fit: Gram matrix numerically indefinite after jitter escalation");

  // local coordinate refinement around the best grid point
  for (int round = 0; round < 2 && opts.optimize_hyper; ++round) {
    for (double f : {1.0 / 1.3, 1.3}) {
      consider(best_len * f, best_amp);
      if (kind == KernelKind::SquaredExponential) consider(best_len, best_amp * f);
    }
  }

  model.length = best_len;
  model.amplitude = best_amp;
  model.weights = best_fit.weights;
  model.jitter = best_fit.jitter;
  return model;
}

}  // namespace windsched
