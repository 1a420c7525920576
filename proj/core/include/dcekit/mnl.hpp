#pragma once

#include <Eigen/Core>

#include "dcekit/model.hpp"
#include "dcekit/types.hpp"

namespace dce {

/// Choice probabilities for one task. task_x is J x K (one row per
/// alternative); computed with max-subtraction, sums to one.
Eigen::VectorXd mnl_probabilities(const Eigen::VectorXd& beta,
                                  const Eigen::MatrixXd& task_x);

/// Exact conditional-logit log-likelihood over the panel; beta is over
/// x_all columns (fixed block then random-as-fixed block).
double mnl_loglik(const Eigen::VectorXd& beta, const PanelData& panel, int threads = 1);

/// Score: sum over tasks of x_chosen - E_p[x].
Eigen::VectorXd mnl_gradient(const Eigen::VectorXd& beta, const PanelData& panel,
                             int threads = 1);

/// Observed-information Hessian (negative semidefinite).
Eigen::MatrixXd mnl_hessian(const Eigen::VectorXd& beta, const PanelData& panel,
                            int threads = 1);

struct MnlConfig {
  double tol = 1e-8; // gradient max-norm
  int max_iter = 200;
  int threads = 1;
};

struct MnlFit {
  Eigen::VectorXd theta;
  Eigen::MatrixXd covariance;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Newton-Raphson with step-halving on the packed panel.
MnlFit fit_mnl_panel(const PanelData& panel, const MnlConfig& config = {});

/// Full pipeline: build the panel, check the design-matrix rank (naming
/// collinear columns), fit, and label estimates per the model spec.
EstimationResult fit_mnl(const ChoiceDataset& data, const ModelSpec& spec,
                         const MnlConfig& config = {});

} // namespace dce
