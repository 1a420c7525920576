#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dcekit/types.hpp"

namespace dce {

/// Per-item group means for a grouping covariate ("town", "campaign", ...).
/// Respondents with a missing grouping value are excluded listwise.
struct GroupMeans {
  std::vector<std::string> groups; // sorted labels
  std::vector<int> group_sizes;
  Eigen::MatrixXd means; // items x groups
};
GroupMeans group_means(const AttitudeDataset& data, const std::string& grouping);

struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  int df_between = 0;
  int df_within = 0;
};

/// One-way ANOVA over raw value groups. Zero within-group variance with
/// equal means defines F = 0.
AnovaResult anova_f_groups(const std::vector<std::vector<double>>& groups);

/// ANOVA of one item (0-based) across the grouping covariate's levels.
AnovaResult anova_f(const AttitudeDataset& data, int item, const std::string& grouping);

/// Agglomerative merge list: ids 0..n-1 are leaves, merge m creates id
/// n + m. Heights are the Ward (Lance-Williams) distances on squared
/// Euclidean input, i.e. twice the within-variance increase of the merge.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
};
struct Dendrogram {
  int n_leaves = 0;
  std::vector<Merge> merges;
};

/// Ward linkage on squared Euclidean distances; ties break on the smallest
/// (left, right) cluster-id pair, so the merge sequence is deterministic.
Dendrogram ward_cluster(const Eigen::MatrixXd& points);

/// Mean over objects of 1 - h_first/h_final; 0 for degenerate trees.
double agglomerative_coefficient(const Dendrogram& tree);

/// Labels 1..k from cutting the merge list; clusters numbered by their
/// smallest member row.
std::vector<int> cut_tree(const Dendrogram& tree, int k);

struct GapResult {
  std::vector<int> ks;
  Eigen::VectorXd log_w;          // observed log within-cluster dispersion
  Eigen::VectorXd log_w_ref_mean; // reference mean of log W*
  Eigen::VectorXd gap;
  Eigen::VectorXd s_k; // sd of log W* times sqrt(1 + 1/B)
  int chosen_k = 1;
};

/// Gap statistic over Ward tree cuts with B uniform reference sets drawn
/// over each feature's observed range. Chosen k = smallest k with
/// Gap(k) >= Gap(k+1) - s_{k+1}; deterministic given the seed.
GapResult gap_statistic(const Eigen::MatrixXd& points, int k_min, int k_max, int B,
                        std::uint64_t seed, int threads = 1);

/// Column-wise (mean 0, sd 1) standardization; constant columns stay 0.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m);

/// respondents x 16 raw item scores.
Eigen::MatrixXd attitude_item_matrix(const AttitudeDataset& data);

/// Numeric covariate of an attitude row by name; NaN when missing.
double attitude_covariate(const AttitudeRow& row, const std::string& name);

struct LogitConfig {
  double tol = 1e-8; // gradient max-norm
  int max_iter = 100;
};

struct LogitResult {
  std::vector<std::string> names;
  Eigen::VectorXd coef;
  Eigen::VectorXd std_error;
  Eigen::MatrixXd covariance;
  double log_likelihood = 0.0;
  double aic = 0.0;
  int n_obs = 0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Logistic regression by iteratively reweighted least squares; standard
/// errors from the inverse Fisher information. X must be full rank and y
/// must contain both classes.
LogitResult fit_logistic(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                         std::vector<std::string> names = {},
                         const LogitConfig& config = {});

} // namespace dce
