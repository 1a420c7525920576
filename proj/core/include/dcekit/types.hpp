#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dcekit/common.hpp"

namespace dce {

enum class AttributeCoding { kDummy, kContinuous };

/// One experiment attribute: an ordered set of levels, either dummy-coded
/// (level index enters the data, reference level = index 0) or continuous
/// (a money value per level, e.g. the price ladder).
struct AttributeSpec {
  std::string name;
  std::vector<std::string> levels;
  AttributeCoding coding = AttributeCoding::kDummy;
  std::vector<double> continuous_values; // one per level, strictly increasing

  void validate() const;
  int n_levels() const { return static_cast<int>(levels.size()); }
  /// The value a level contributes to a data row: the index for dummy
  /// coding, the declared money value for continuous coding.
  double level_value(int level_index) const;
  /// Inverse of level_value; -1 if the value is not a declared level.
  int index_of_value(double value) const;
};

/// An alternative inside a choice card: one level index per attribute,
/// in the attribute-list order.
using LevelVector = std::vector<int>;

/// The implicit status-quo alternative: every attribute at its reference
/// level, continuous attributes at their lowest value.
inline LevelVector baseline_levels(const std::vector<AttributeSpec>& attrs) {
  return LevelVector(attrs.size(), 0);
}

/// One choice card: two designed alternatives (A, B) shown against the
/// implicit baseline C.
struct ChoiceCard {
  int card_id = 0;
  int block_id = 0;
  std::vector<LevelVector> alternatives;
};

/// One long-format observation row.
struct ChoiceRow {
  int respondent_id = 0;
  int task_id = 0;
  std::string alternative_id; // "A", "B", "C"
  int chosen = 0;
  std::vector<double> values; // one per attribute, in dataset attribute order
};

using CovariateTable = std::map<int, std::map<std::string, double>>;

/// Validated long-format panel: rows sorted by (respondent, task,
/// alternative), exactly one chosen row per task, a constant alternative
/// count across tasks, and every value a declared level. Immutable after
/// construction.
class ChoiceDataset {
public:
  ChoiceDataset(std::vector<AttributeSpec> attributes, std::vector<ChoiceRow> rows,
                CovariateTable covariates = {});

  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  const std::vector<ChoiceRow>& rows() const { return rows_; }
  const CovariateTable& covariates() const { return covariates_; }

  int n_respondents() const { return static_cast<int>(respondent_ids_.size()); }
  int n_tasks() const { return static_cast<int>(tasks_.size()); }
  int n_alternatives() const { return n_alternatives_; }
  const std::vector<int>& respondent_ids() const { return respondent_ids_; }
  /// Half-open row range [first, second) of task t in row order.
  const std::vector<std::pair<std::size_t, std::size_t>>& tasks() const { return tasks_; }

  int attribute_index(const std::string& name) const;
  double covariate(int respondent_id, const std::string& name) const;

  ChoiceDataset filter_respondents(const std::function<bool(int)>& keep) const;
  ChoiceDataset with_covariates(CovariateTable covariates) const;

private:
  std::vector<AttributeSpec> attributes_;
  std::vector<ChoiceRow> rows_;
  CovariateTable covariates_;
  std::vector<std::pair<std::size_t, std::size_t>> tasks_;
  std::vector<int> respondent_ids_;
  int n_alternatives_ = 0;
};

/// Which coefficients are fixed vs. normally mixed, where the ASCs sit,
/// and which (attribute x respondent covariate) interactions enter.
/// Interactions are always fixed coefficients.
struct ModelSpec {
  std::vector<std::string> asc_alternatives = {"A", "B"};
  std::vector<std::string> fixed_coefficients;
  std::vector<std::string> random_coefficients; // normal mixing only
  std::vector<std::pair<std::string, std::string>> interactions;
  int n_draws = 100;
  std::uint64_t seed = 42;

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EstimationResult {
  std::vector<std::string> parameter_names; // full free-parameter order
  std::map<std::string, Estimate> estimates;      // fixed + random means
  std::map<std::string, Estimate> random_spreads; // by coefficient name
  double log_likelihood = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  int n_observations = 0; // choice situations
  int n_respondents = 0;
  bool converged = false;
  int iterations = 0;
  bool std_errors_reliable = true;
  Eigen::MatrixXd covariance; // over parameter_names; empty if unavailable

  bool has_covariance() const { return covariance.rows() > 0; }
  /// aic = 2k - 2*ll, bic = k*ln(n_observations) - 2*ll.
  void recompute_information_criteria();
  const Estimate& coefficient(const std::string& name) const;
  int parameter_index(const std::string& name) const;
  double covariance_between(const std::string& a, const std::string& b) const;
};

/// One attitudinal-survey respondent: sixteen 1-5 item scores plus
/// demographics. NaN marks a missing covariate (excluded listwise per
/// analysis).
struct AttitudeRow {
  int respondent_id = 0;
  std::array<int, 16> items{};
  double age = 0.0;
  double female = 0.0;
  double tourist = 0.0;
  double education = 0.0;
  double income = 0.0; // category 1..6
  double fix_income = 0.0;
  double campaign = 0.0;
  std::string town;
};

struct AttitudeDataset {
  static constexpr int kItems = 16;
  std::vector<AttitudeRow> respondents;
  std::vector<int> item_factors = default_item_factors();

  static std::vector<int> default_item_factors();
  void validate() const;
};

} // namespace dce
