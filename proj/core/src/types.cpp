#include "dcekit/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dce {

void AttributeSpec::validate() const {
  if (name.empty()) throw ValidationError("attribute with empty name");
  if (levels.size() < 2)
    throw ValidationError("attribute '" + name + "' needs >= 2 levels");
  std::set<std::string> seen(levels.begin(), levels.end());
  if (seen.size() != levels.size())
    throw ValidationError("attribute '" + name + "' has duplicate level labels");
  if (coding == AttributeCoding::kContinuous) {
    if (continuous_values.size() != levels.size())
      throw ValidationError("attribute '" + name +
                            "': continuous_values must have one value per level");
    for (std::size_t i = 1; i < continuous_values.size(); ++i) {
      if (!(continuous_values[i] > continuous_values[i - 1]))
        throw ValidationError("attribute '" + name +
                              "': continuous_values must be strictly increasing");
    }
  } else if (!continuous_values.empty()) {
    throw ValidationError("attribute '" + name +
                          "': continuous_values only allowed for continuous coding");
  }
}

double AttributeSpec::level_value(int level_index) const {
  if (level_index < 0 || level_index >= static_cast<int>(levels.size()))
    throw ValidationError("attribute '" + name + "': level index out of range");
  if (coding == AttributeCoding::kContinuous) return continuous_values[level_index];
  return static_cast<double>(level_index);
}

int AttributeSpec::index_of_value(double value) const {
  if (coding == AttributeCoding::kContinuous) {
    for (std::size_t i = 0; i < continuous_values.size(); ++i)
      if (continuous_values[i] == value) return static_cast<int>(i);
    return -1;
  }
  const double rounded = std::round(value);
  if (rounded != value) return -1;
  const int idx = static_cast<int>(rounded);
  if (idx < 0 || idx >= static_cast<int>(levels.size())) return -1;
  return idx;
}

void ModelSpec::validate() const {
  std::set<std::string> fixed(fixed_coefficients.begin(), fixed_coefficients.end());
  std::set<std::string> random(random_coefficients.begin(), random_coefficients.end());
  if (fixed.size() != fixed_coefficients.size())
    throw ValidationError("model spec: duplicate fixed coefficient");
  if (random.size() != random_coefficients.size())
    throw ValidationError("model spec: duplicate random coefficient");
  for (const auto& name : fixed_coefficients) {
    if (random.count(name))
      throw ValidationError("coefficient '" + name + "' declared both fixed and random");
  }
  std::set<std::string> ascs(asc_alternatives.begin(), asc_alternatives.end());
  if (ascs.size() != asc_alternatives.size())
    throw ValidationError("model spec: duplicate ASC alternative");
}

ChoiceDataset::ChoiceDataset(std::vector<AttributeSpec> attributes,
                             std::vector<ChoiceRow> rows,
                             CovariateTable covariates)
    : attributes_(std::move(attributes)),
      rows_(std::move(rows)),
      covariates_(std::move(covariates)) {
  for (const auto& a : attributes_) a.validate();

  std::stable_sort(rows_.begin(), rows_.end(), [](const ChoiceRow& a, const ChoiceRow& b) {
    if (a.respondent_id != b.respondent_id) return a.respondent_id < b.respondent_id;
    if (a.task_id != b.task_id) return a.task_id < b.task_id;
    return a.alternative_id < b.alternative_id;
  });

  const std::size_t n_attr = attributes_.size();
  for (const auto& row : rows_) {
    if (row.values.size() != n_attr)
      throw ValidationError("respondent " + std::to_string(row.respondent_id) + " task " +
                            std::to_string(row.task_id) + ": expected " +
                            std::to_string(n_attr) + " attribute values");
    for (std::size_t a = 0; a < n_attr; ++a) {
      if (attributes_[a].index_of_value(row.values[a]) < 0) {
        std::ostringstream msg;
        msg << "respondent " << row.respondent_id << " task " << row.task_id
            << ": value " << row.values[a] << " is not a declared level of '"
            << attributes_[a].name << "'";
        throw ValidationError(msg.str());
      }
    }
  }

  // Group into tasks; enforce one chosen row and distinct alternatives per task.
  int alts_per_task = -1;
  std::size_t i = 0;
  while (i < rows_.size()) {
    std::size_t j = i;
    while (j < rows_.size() && rows_[j].respondent_id == rows_[i].respondent_id &&
           rows_[j].task_id == rows_[i].task_id)
      ++j;
    const std::string where = "respondent " + std::to_string(rows_[i].respondent_id) +
                              " task " + std::to_string(rows_[i].task_id);
    int chosen_count = 0;
    std::set<std::string> alt_ids;
    for (std::size_t k = i; k < j; ++k) {
      chosen_count += rows_[k].chosen;
      if (rows_[k].chosen != 0 && rows_[k].chosen != 1)
        throw ValidationError(where + ": chosen flag must be 0 or 1");
      if (!alt_ids.insert(rows_[k].alternative_id).second)
        throw ValidationError(where + ": duplicate alternative '" +
                              rows_[k].alternative_id + "'");
    }
    if (chosen_count != 1)
      throw ValidationError(where + ": expected exactly one chosen alternative, found " +
                            std::to_string(chosen_count));
    const int n_alts = static_cast<int>(j - i);
    if (alts_per_task < 0) {
      alts_per_task = n_alts;
    } else if (n_alts != alts_per_task) {
      throw ValidationError(where + ": " + std::to_string(n_alts) +
                            " alternatives, expected " + std::to_string(alts_per_task));
    }
    tasks_.push_back({i, j});
    if (respondent_ids_.empty() || respondent_ids_.back() != rows_[i].respondent_id)
      respondent_ids_.push_back(rows_[i].respondent_id);
    i = j;
  }
  n_alternatives_ = std::max(alts_per_task, 0);

  std::set<int> distinct(respondent_ids_.begin(), respondent_ids_.end());
  if (distinct.size() != respondent_ids_.size())
    throw ValidationError("dataset rows are not grouped by respondent after sorting");
}

int ChoiceDataset::attribute_index(const std::string& name) const {
  for (std::size_t a = 0; a < attributes_.size(); ++a)
    if (attributes_[a].name == name) return static_cast<int>(a);
  return -1;
}

double ChoiceDataset::covariate(int respondent_id, const std::string& name) const {
  auto it = covariates_.find(respondent_id);
  if (it == covariates_.end())
    throw ValidationError("respondent " + std::to_string(respondent_id) +
                          ": no covariates attached");
  auto jt = it->second.find(name);
  if (jt == it->second.end())
    throw ValidationError("respondent " + std::to_string(respondent_id) +
                          ": missing covariate '" + name + "'");
  return jt->second;
}

ChoiceDataset ChoiceDataset::with_covariates(CovariateTable covariates) const {
  return ChoiceDataset(attributes_, rows_, std::move(covariates));
}

ChoiceDataset ChoiceDataset::filter_respondents(
    const std::function<bool(int)>& keep) const {
  std::vector<ChoiceRow> rows;
  CovariateTable covs;
  for (const auto& row : rows_) {
    if (!keep(row.respondent_id)) continue;
    rows.push_back(row);
  }
  for (const auto& [id, named] : covariates_)
    if (keep(id)) covs[id] = named;
  return ChoiceDataset(attributes_, std::move(rows), std::move(covs));
}

void EstimationResult::recompute_information_criteria() {
  const double k = static_cast<double>(parameter_names.size());
  aic = 2.0 * k - 2.0 * log_likelihood;
  bic = k * std::log(static_cast<double>(n_observations)) - 2.0 * log_likelihood;
}

const Estimate& EstimationResult::coefficient(const std::string& name) const {
  auto it = estimates.find(name);
  if (it == estimates.end())
    throw ValidationError("result has no coefficient '" + name + "'");
  return it->second;
}

int EstimationResult::parameter_index(const std::string& name) const {
  for (std::size_t i = 0; i < parameter_names.size(); ++i)
    if (parameter_names[i] == name) return static_cast<int>(i);
  return -1;
}

double EstimationResult::covariance_between(const std::string& a,
                                            const std::string& b) const {
  const int ia = parameter_index(a);
  const int ib = parameter_index(b);
  if (ia < 0 || ib < 0 || covariance.rows() == 0)
    throw ValidationError("covariance unavailable for (" + a + ", " + b + ")");
  return covariance(ia, ib);
}

std::vector<int> AttitudeDataset::default_item_factors() {
  // Item 1 is a stand-alone preamble (factor 0); the remaining items group
  // into five factors: 2-4, 5-8, 9-10, 11, 12-16.
  return {0, 1, 1, 1, 2, 2, 2, 2, 3, 3, 4, 5, 5, 5, 5, 5};
}

void AttitudeDataset::validate() const {
  for (const auto& row : respondents) {
    for (int s : row.items) {
      if (s < 1 || s > 5)
        throw ValidationError("respondent " + std::to_string(row.respondent_id) +
                              ": item score " + std::to_string(s) + " outside 1..5");
    }
  }
}

} // namespace dce
