#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dcekit/types.hpp"

namespace dce {

/// One expanded design-matrix column over the attribute list: a continuous
/// attribute contributes its value, a dummy attribute one indicator per
/// non-reference level.
struct AttributeColumn {
  int attribute = 0;   // index into the attribute list
  int level = -1;      // indicator level; -1 for continuous
  std::string name;    // "price", "origin", "material=steel"
};

std::vector<AttributeColumn> expand_attribute_columns(
    const std::vector<AttributeSpec>& attrs);
std::vector<AttributeColumn> expand_attribute_columns(
    const std::vector<AttributeSpec>& attrs, const std::vector<std::string>& only);

/// Value of an expanded column given one attribute-value row.
inline double column_value(const AttributeColumn& col, const AttributeSpec& attr,
                           double raw_value) {
  if (col.level < 0) return raw_value;
  return attr.index_of_value(raw_value) == col.level ? 1.0 : 0.0;
}

/// Deterministic free-parameter order shared by the estimators, the result
/// files and the synthetic generator:
///   ASCs, fixed attribute columns, interaction terms   (fixed block)
///   random coefficient means                           (random block)
///   one spread per random coefficient ("sd_<name>")    (mixed logit only)
struct ParameterLayout {
  std::vector<std::string> names;
  std::vector<std::string> fixed_names;
  std::vector<std::string> random_names;
  bool has_spreads = false;

  int n_fixed() const { return static_cast<int>(fixed_names.size()); }
  int n_random() const { return static_cast<int>(random_names.size()); }
  int size() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;
};

ParameterLayout mnl_layout(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec);
ParameterLayout mixl_layout(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec);

/// Estimation view of a ChoiceDataset: per-alternative design-matrix rows
/// packed contiguously by respondent and task. Respondents missing an
/// interaction covariate are dropped listwise at construction.
class PanelData {
public:
  PanelData(const ChoiceDataset& data, const ModelSpec& spec);

  int n_respondents() const { return static_cast<int>(resp_task_begin_.size()) - 1; }
  int n_tasks() const { return static_cast<int>(task_chosen_.size()); }
  int n_alternatives() const { return n_alts_; }
  int n_rows() const { return static_cast<int>(x_fixed_.rows()); }

  /// rows x n_fixed (ASCs, fixed coefficients, interactions).
  const Eigen::MatrixXd& x_fixed() const { return x_fixed_; }
  /// rows x n_random (one column per random coefficient).
  const Eigen::MatrixXd& x_random() const { return x_random_; }
  /// rows x (n_fixed + n_random), the exact-MNL design matrix.
  Eigen::MatrixXd x_all() const;

  const std::vector<std::string>& fixed_names() const { return fixed_names_; }
  const std::vector<std::string>& random_names() const { return random_names_; }

  /// Tasks of respondent r: [resp_task_begin(r), resp_task_begin(r+1)).
  int resp_task_begin(int r) const { return resp_task_begin_[r]; }
  /// First row of task t; a task spans n_alternatives consecutive rows.
  int task_row_begin(int t) const { return t * n_alts_; }
  /// Within-task index of the chosen alternative.
  int task_chosen(int t) const { return task_chosen_[t]; }

  const std::vector<int>& respondent_ids() const { return respondent_ids_; }
  int n_dropped_respondents() const { return n_dropped_; }

private:
  Eigen::MatrixXd x_fixed_;
  Eigen::MatrixXd x_random_;
  std::vector<int> resp_task_begin_;
  std::vector<int> task_chosen_;
  std::vector<int> respondent_ids_;
  std::vector<std::string> fixed_names_;
  std::vector<std::string> random_names_;
  int n_alts_ = 0;
  int n_dropped_ = 0;
};

/// Per-alternative design row for data that is not in a dataset yet (the
/// synthetic generator works from cards, the estimators from CSV rows).
class RowBuilder {
public:
  RowBuilder(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec);

  int n_fixed() const { return static_cast<int>(fixed_names_.size()); }
  int n_random() const { return static_cast<int>(random_names_.size()); }
  const std::vector<std::string>& fixed_names() const { return fixed_names_; }
  const std::vector<std::string>& random_names() const { return random_names_; }
  const std::vector<std::string>& interaction_covariates() const {
    return interaction_covariates_;
  }

  using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

  /// raw_values: one value per attribute (level index for dummies, money
  /// value for continuous). covariates looked up by interaction name.
  void fill(const std::string& alternative_id, const std::vector<double>& raw_values,
            const std::map<std::string, double>& covariates, RowRef fixed_out,
            RowRef random_out) const;

private:
  const std::vector<AttributeSpec>& attrs_;
  std::vector<std::string> asc_alternatives_;
  std::vector<AttributeColumn> fixed_cols_;
  std::vector<AttributeColumn> random_cols_;
  struct InteractionCol {
    AttributeColumn column;
    std::string covariate;
  };
  std::vector<InteractionCol> interaction_cols_;
  std::vector<std::string> fixed_names_;
  std::vector<std::string> random_names_;
  std::vector<std::string> interaction_covariates_;
};

/// Result assembly shared by the fitters.
EstimationResult make_result(const ParameterLayout& layout, const Eigen::VectorXd& theta,
                             const Eigen::MatrixXd& covariance, double log_likelihood,
                             int n_observations, int n_respondents, bool converged,
                             int iterations);

} // namespace dce
