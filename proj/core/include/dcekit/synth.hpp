#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dcekit/design.hpp"
#include "dcekit/model.hpp"
#include "dcekit/types.hpp"

namespace dce {

struct BernoulliCovariate {
  std::string name;
  double prob = 0.5;
};

struct SynthConfig {
  std::vector<BernoulliCovariate> covariates = {{"campaign", 0.4}};
};

/// Generative inverse of the estimators: per respondent draw normal
/// coefficients from the truth, assign one random design block, and record
/// the Gumbel-perturbed argmax alternative of every card as chosen.
/// truth_theta follows the mixed-logit layout [fixed | means | spreads].
/// Reproducible: respondent r derives its own stream from (seed, r).
ChoiceDataset simulate_choices(const DesignPlan& design,
                               const std::vector<AttributeSpec>& attrs,
                               const ModelSpec& spec, const Eigen::VectorXd& truth_theta,
                               int n_respondents, std::uint64_t seed,
                               const SynthConfig& config = {});

/// Gauss-Hermite tensor quadrature of the panel mixed-logit likelihood;
/// the exact-up-to-quadrature reference for simulated_loglik. Supports at
/// most two random coefficients.
double quadrature_loglik(const Eigen::VectorXd& theta, const ChoiceDataset& data,
                         const ModelSpec& spec, int nodes = 64);

} // namespace dce
