#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace siv::analysis {

using ModelFn = std::function<double(double x, std::span<const double> params)>;

struct FitResult {
  std::vector<double> params;
  /// 1-sigma uncertainties from the inverse curvature matrix; empty unless converged.
  std::vector<double> sigmas;
  Eigen::MatrixXd covariance;
  /// Weighted residual norm sqrt(sum ((y - f) / sigma)^2).
  double residual_norm = 0;
  double chi2 = 0;
  /// chi2 / (points - free parameters), 0 when there are no degrees of freedom.
  double reduced_chi2 = 0;
  bool converged = false;
  int iterations = 0;
  /// Weighted residual norm after each accepted step, starting with the initial guess.
  std::vector<double> accepted_norms;
};

struct NllsOptions {
  int max_iterations = 200;
  double relative_step_tolerance = 1e-8;
  /// Parameters held at their initial value; empty means all free.
  std::vector<bool> fixed;
};

/// Levenberg-Marquardt with a central-difference Jacobian. Converges when a
/// step moves every free parameter by less than relative_step_tolerance of
/// its value, or the residual vanishes. Hitting max_iterations returns the last
/// accepted parameters with converged = false. Throws DomainError for fewer
/// points than free parameters, mismatched sizes or non-positive sigma, and
/// DegenerateFitError when the curvature matrix is singular at the solution.
FitResult nlls_fit(const ModelFn& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma, std::vector<double> initial,
                   const NllsOptions& options = {});

}  // namespace siv::analysis
