#pragma once

#include <Eigen/Dense>
#include <string>

namespace windsched {

enum class KernelKind { SquaredExponential, Linear };

// covariance between two points; SE: amp^2 exp(-|x-x'|^2 / (2 len^2)),
// linear: x.x' / len^2 (no intercept)
double kernel_eval(KernelKind kind, double amplitude, double length,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime);

// Kernel-weighted interpolant f(x) = sum_k weights[k] * C(inputs[k], x).
// Immutable after fit.
struct GpModel {
  KernelKind kind = KernelKind::SquaredExponential;
  double amplitude = 1.0;  // unused by the linear kernel
  double length = 1.0;
  double jitter = 0.0;  // diagonal noise actually used by the fit
  Eigen::MatrixXd inputs;   // K x d
  Eigen::VectorXd weights;  // K

  double predict(const Eigen::VectorXd& x) const;
  double predict1(double x) const;

  // Linear kernel only: the model collapses to coeffs.x with
  // coeffs = inputs' * weights / length^2.
  Eigen::VectorXd linear_coefficients() const;

  // componentwise bounding box of the training inputs
  bool in_training_hull(const Eigen::VectorXd& x) const;
};

struct GpFitOptions {
  double jitter_start_scale = 1e-10;  // relative to mean Gram diagonal
  double jitter_max_scale = 1e-4;
  // hyperparameter grids per the documented selection scheme; bounds are
  // relative to the data/input scale
  int length_grid = 16;
  int amplitude_grid = 8;
  bool optimize_hyper = true;
  double fixed_length = 0.0;    // >0: skip the length search
  double fixed_amplitude = 0.0; // >0: skip the amplitude search
};

// Fits weights by solving (Gram + jitter I) w = y with an LLT factorization;
// hyperparameters maximize the log marginal likelihood over a log-spaced grid
// followed by a local refinement.
GpModel gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
               KernelKind kind, const GpFitOptions& opts = {});

}  // namespace windsched
