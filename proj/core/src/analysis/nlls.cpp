#include "siv/analysis/nlls.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "siv/errors.hpp"

namespace siv::analysis {

namespace {

double weighted_norm2(const ModelFn& f, std::span<const double> x, std::span<const double> y,
                      std::span<const double> s, std::span<const double> p, Eigen::VectorXd* r_out) {
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = (y[i] - f(x[i], p)) / s[i];
    if (r_out) (*r_out)[static_cast<Eigen::Index>(i)] = r;
    sum += r * r;
  }
  return std::isfinite(sum) ? sum : std::numeric_limits<double>::infinity();
}

}  // namespace

FitResult nlls_fit(const ModelFn& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma, std::vector<double> initial,
                   const NllsOptions& options) {
  const std::size_t m = x.size();
  const std::size_t n = initial.size();
  if (y.size() != m || sigma.size() != m) throw DomainError("x, y and sigma must have equal length");
  if (!options.fixed.empty() && options.fixed.size() != n)
    throw DomainError("fixed mask length differs from the parameter count");
  for (double s : sigma)
    if (!(s > 0)) throw DomainError("sigma must be positive");

  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < n; ++k)
    if (options.fixed.empty() || !options.fixed[k]) free.push_back(k);
  const auto nf = static_cast<Eigen::Index>(free.size());
  if (m < free.size()) throw DomainError("fewer data points than free parameters");

  FitResult res;
  std::vector<double> p = std::move(initial);
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  double cost = weighted_norm2(model, x, y, sigma, p, &r);
  if (!std::isfinite(cost)) throw DomainError("model is not finite at the initial guess");
  res.accepted_norms.push_back(std::sqrt(cost));

  Eigen::MatrixXd J(static_cast<Eigen::Index>(m), nf);
  auto jacobian = [&] {
    std::vector<double> q = p;
    for (Eigen::Index c = 0; c < nf; ++c) {
      const std::size_t k = free[static_cast<std::size_t>(c)];
      const double h = 1e-6 * std::max(std::abs(p[k]), 1e-6);
      for (std::size_t i = 0; i < m; ++i) {
        q[k] = p[k] + h;
        const double fp = model(x[i], q);
        q[k] = p[k] - h;
        const double fm = model(x[i], q);
        // Jacobian of the weighted residual (y - f) / sigma.
        J(static_cast<Eigen::Index>(i), c) = -(fp - fm) / (2 * h * sigma[i]);
      }
      q[k] = p[k];
    }
  };

  double lambda = -1;
  bool converged = cost == 0 || nf == 0;
  int it = 0;
  std::vector<double> trial(n);
  Eigen::VectorXd r_trial(static_cast<Eigen::Index>(m));
  while (!converged && it < options.max_iterations) {
    ++it;
    jacobian();
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    // Damping scales diag(A), so lambda is dimensionless.
    if (lambda < 0) lambda = 1e-3;
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd Ad = A;
      for (Eigen::Index k = 0; k < nf; ++k) Ad(k, k) += lambda * std::max(A(k, k), 1e-300);
      const Eigen::VectorXd delta = Ad.ldlt().solve(-g);
      // Per-parameter test: parameters of very different scale must each settle.
      bool tiny = true;
      for (Eigen::Index c = 0; c < nf; ++c)
        tiny = tiny && std::abs(delta[c]) <=
                           options.relative_step_tolerance * (std::abs(p[free[static_cast<std::size_t>(c)]]) + 1e-300);
      trial = p;
      for (Eigen::Index c = 0; c < nf; ++c) trial[free[static_cast<std::size_t>(c)]] += delta[c];
      const double c_trial = delta.allFinite() ? weighted_norm2(model, x, y, sigma, trial, &r_trial)
                                               : std::numeric_limits<double>::infinity();
      if (c_trial < cost) {
        p = trial;
        r = r_trial;
        cost = c_trial;
        res.accepted_norms.push_back(std::sqrt(cost));
        lambda = std::max(lambda / 10, 1e-15);
        accepted = true;
        // A tiny step under heavy damping is not yet a minimum.
        converged = (tiny && lambda <= 1) || cost == 0;
      } else if (tiny || !(lambda < 1e20)) {
        // No decrease even for a vanishing step: at the minimum to working precision.
        converged = true;
        break;
      } else {
        lambda *= 10;
      }
    }
  }

  res.params = p;
  res.chi2 = cost;
  res.residual_norm = std::sqrt(cost);
  res.iterations = it;
  res.converged = converged;
  const auto dof = static_cast<double>(m) - static_cast<double>(nf);
  res.reduced_chi2 = dof > 0 ? cost / dof : 0;
  if (converged && nf > 0) {
    jacobian();
    const Eigen::MatrixXd A = J.transpose() * J;
    // Equilibrate so the singularity test does not depend on parameter units.
    const Eigen::VectorXd d = A.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = d.asDiagonal() * A * d.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(scaled);
    lu.setThreshold(1e-12);
    if (A.diagonal().minCoeff() <= 0 || !lu.isInvertible())
      throw DegenerateFitError("normal equations are singular at the solution");
    const Eigen::MatrixXd cov_free = d.asDiagonal() * lu.inverse() * d.asDiagonal();
    res.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    res.sigmas.assign(n, 0.0);
    for (Eigen::Index a = 0; a < nf; ++a) {
      for (Eigen::Index b = 0; b < nf; ++b)
        res.covariance(static_cast<Eigen::Index>(free[static_cast<std::size_t>(a)]),
                       static_cast<Eigen::Index>(free[static_cast<std::size_t>(b)])) = cov_free(a, b);
      res.sigmas[free[static_cast<std::size_t>(a)]] = std::sqrt(std::max(0.0, cov_free(a, a)));
    }
  }
  return res;
}

}  // namespace siv::analysis
