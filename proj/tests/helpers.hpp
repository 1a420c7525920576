#pragma once

// Shared fixture builders for the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "dcekit/io.hpp"
#include "dcekit/types.hpp"

namespace fixtures {

inline dce::AttributeSpec binary_attr(const std::string& name) {
  dce::AttributeSpec a;
  a.name = name;
  a.levels = {"no", "yes"};
  a.coding = dce::AttributeCoding::kDummy;
  return a;
}

inline std::vector<dce::AttributeSpec> paper_attrs() { return dce::default_attributes(); }

inline dce::ModelSpec paper_spec() {
  dce::ModelSpec spec;
  spec.fixed_coefficients = {"price"};
  spec.random_coefficients = {"origin", "processing", "harvesting", "certification",
                              "heritage"};
  return spec;
}

/// Table-5 column (1) shaped truth used across recovery tests.
inline Eigen::VectorXd paper_truth() {
  Eigen::VectorXd theta(13);
  theta << 1.361, 1.580, -0.090,                 // asc_a, asc_b, price
      0.965, 0.624, 0.938, 1.215, 0.454,         // random means
      1.028, 0.767, 1.069, 1.150, 0.829;         // spreads
  return theta;
}

/// Published column (1) estimates packaged as a result, with enough
/// covariance structure for the delta-method paths.
dce::EstimationResult table5_result();

/// Random valid panel over `attrs`: n respondents x tasks x 3 alternatives
/// with uniform level values and a uniformly chosen alternative.
dce::ChoiceDataset random_dataset(const std::vector<dce::AttributeSpec>& attrs, int n_resp,
                                  int n_tasks, std::uint64_t seed);

/// 16-card, 4-block plan over the paper grammar (fixed seed).
dce::DesignPlan paper_plan(std::uint64_t seed = 1);

} // namespace fixtures
