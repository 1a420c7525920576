#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "dcekit/types.hpp"

namespace dce {

/// All level combinations in lexicographic order (first attribute most
/// significant). Throws if the count would exceed 10^7.
std::vector<LevelVector> full_factorial(const std::vector<AttributeSpec>& attrs);

/// +1: higher levels preferred (desirable dummies); -1: lower preferred
/// (price). Default: +1 for dummy attributes, -1 for continuous ones.
std::map<std::string, int> default_preference_direction(
    const std::vector<AttributeSpec>& attrs);

/// True iff some alternative in the card (the implicit baseline included)
/// is weakly better on every attribute and strictly better on at least one
/// than another. Identical alternatives are not dominance; see
/// is_degenerate.
bool is_dominated(const ChoiceCard& card, const std::vector<AttributeSpec>& attrs,
                  const std::map<std::string, int>& direction);

/// True iff two alternatives of the card coincide (baseline included).
bool is_degenerate(const ChoiceCard& card, const std::vector<AttributeSpec>& attrs);

/// D-error of a design under a prior coefficient vector: det(M)^(-1/K)
/// where M is the multinomial-logit information matrix over the expanded
/// attribute columns (no ASCs) and K their count. Lower is better;
/// +infinity signals a singular information matrix. An empty prior means
/// the zero (utility-neutral) prior.
double score_d_error(const std::vector<ChoiceCard>& cards,
                     const std::vector<AttributeSpec>& attrs,
                     const Eigen::VectorXd& prior = Eigen::VectorXd());

struct DesignConfig {
  int n_cards = 16;
  int n_blocks = 4;
  std::uint64_t seed = 1;
  int max_sweeps = 50;
  Eigen::VectorXd prior; // empty = zero prior
};

struct DesignPlan {
  std::vector<ChoiceCard> cards;
  int n_blocks = 1;
  Eigen::VectorXd prior;
  double d_error = 0.0;
  Eigen::MatrixXd attribute_correlation; // over expanded attribute columns
};

/// Coordinate-exchange search: per sweep, each alternative slot of each
/// card is offered the candidate that lowers the D-error most while the
/// card stays non-dominated and non-degenerate. Stops after a sweep with
/// no accepted swap or after max_sweeps. Deterministic given the seed.
DesignPlan optimize_design(const std::vector<LevelVector>& candidates,
                           const std::vector<AttributeSpec>& attrs,
                           const DesignConfig& config);

/// Equal-size blocks by greedy swap descent on the maximum absolute
/// deviation of per-block attribute-level counts from the design-wide
/// counts divided by n_blocks. Returns one 1-based block id per card.
std::vector<int> assign_blocks(const std::vector<ChoiceCard>& cards,
                               const std::vector<AttributeSpec>& attrs, int n_blocks,
                               std::uint64_t seed);

/// Correlation of the expanded attribute columns over all alternative rows
/// (baseline included); zero where a column is constant.
Eigen::MatrixXd attribute_correlation(const std::vector<ChoiceCard>& cards,
                                      const std::vector<AttributeSpec>& attrs);

} // namespace dce
