#pragma once

#include <functional>

#include <Eigen/Core>

#include "dcekit/draws.hpp"
#include "dcekit/model.hpp"
#include "dcekit/types.hpp"

namespace dce {

/// Panel simulated log-likelihood. theta = [fixed | random means | spreads];
/// respondent r's coefficient at draw d is mean + |spread| * z_rd. Per
/// respondent the T task log-probabilities accumulate in the log domain and
/// the average over draws goes through log-sum-exp, so the value is exact in
/// the spreads = 0 limit and underflow-safe in T.
double simulated_loglik(const Eigen::VectorXd& theta, const PanelData& panel,
                        const DrawMatrix& draws, int threads = 1);

/// Central finite differences with per-coordinate relative step.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& theta, double rel_step);

/// Finite-difference Hessian as the central difference of fd_gradient;
/// asymmetry of the result measures finite-difference quality.
Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& fn,
                           const Eigen::VectorXd& theta, double grad_rel_step,
                           double hess_rel_step);

struct MixlConfig {
  int n_draws = 100;
  DrawGenerator generator = DrawGenerator::kHalton;
  std::uint64_t seed = 42;
  double tol_param = 1e-6;   // max parameter change
  double tol_loglik = 1e-4;  // log-likelihood change
  int max_iter = 500;
  double fd_step = 1e-5;       // relative, gradient
  double fd_hess_step = 1e-4;  // relative, Hessian
  int threads = 1;
};

struct MixlFit {
  Eigen::VectorXd theta;
  Eigen::MatrixXd covariance; // empty when the Hessian is singular
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool std_errors_reliable = true;
  std::string message;
};

/// BFGS ascent with finite-difference gradients over a fixed DrawMatrix.
MixlFit fit_mixl_panel(const PanelData& panel, const DrawMatrix& draws,
                       const Eigen::VectorXd& theta0, const MixlConfig& config);

/// Full pipeline: MNL starting values (spreads at 0.5), Halton draws per
/// config, simulated-ML fit, standard errors from the inverse negative
/// finite-difference Hessian. Non-convergence returns the last iterate,
/// flagged.
EstimationResult fit_mixl(const ChoiceDataset& data, const ModelSpec& spec,
                          const MixlConfig& config = {});

} // namespace dce
