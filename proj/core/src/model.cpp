#include "dcekit/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

namespace dce {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int find_attribute(const std::vector<AttributeSpec>& attrs, const std::string& name) {
  for (std::size_t i = 0; i < attrs.size(); ++i)
    if (attrs[i].name == name) return static_cast<int>(i);
  throw ValidationError("model spec names unknown attribute '" + name + "'");
}

std::vector<AttributeColumn> columns_for(const std::vector<AttributeSpec>& attrs,
                                         int attr_index) {
  const AttributeSpec& a = attrs[attr_index];
  std::vector<AttributeColumn> cols;
  if (a.coding == AttributeCoding::kContinuous) {
    cols.push_back({attr_index, -1, a.name});
  } else if (a.n_levels() == 2) {
    cols.push_back({attr_index, 1, a.name});
  } else {
    for (int l = 1; l < a.n_levels(); ++l)
      cols.push_back({attr_index, l, a.name + "=" + a.levels[l]});
  }
  return cols;
}

} // namespace

std::vector<AttributeColumn> expand_attribute_columns(
    const std::vector<AttributeSpec>& attrs) {
  std::vector<AttributeColumn> out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    auto cols = columns_for(attrs, static_cast<int>(i));
    out.insert(out.end(), cols.begin(), cols.end());
  }
  return out;
}

std::vector<AttributeColumn> expand_attribute_columns(
    const std::vector<AttributeSpec>& attrs, const std::vector<std::string>& only) {
  std::vector<AttributeColumn> out;
  for (const auto& name : only) {
    auto cols = columns_for(attrs, find_attribute(attrs, name));
    out.insert(out.end(), cols.begin(), cols.end());
  }
  return out;
}

int ParameterLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

RowBuilder::RowBuilder(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec)
    : attrs_(attrs), asc_alternatives_(spec.asc_alternatives) {
  spec.validate();
  for (const auto& alt : asc_alternatives_) fixed_names_.push_back("asc_" + lower(alt));
  fixed_cols_ = expand_attribute_columns(attrs, spec.fixed_coefficients);
  for (const auto& c : fixed_cols_) fixed_names_.push_back(c.name);
  std::set<std::string> covs;
  for (const auto& [attr, cov] : spec.interactions) {
    for (const auto& col : expand_attribute_columns(attrs, {attr})) {
      interaction_cols_.push_back({col, cov});
      fixed_names_.push_back(col.name + "*" + cov);
    }
    if (covs.insert(cov).second) interaction_covariates_.push_back(cov);
  }
  random_cols_ = expand_attribute_columns(attrs, spec.random_coefficients);
  for (const auto& c : random_cols_) random_names_.push_back(c.name);
}

void RowBuilder::fill(const std::string& alternative_id,
                      const std::vector<double>& raw_values,
                      const std::map<std::string, double>& covariates, RowRef fixed_out,
                      RowRef random_out) const {
  int c = 0;
  for (const auto& alt : asc_alternatives_)
    fixed_out(c++) = alternative_id == alt ? 1.0 : 0.0;
  for (const auto& col : fixed_cols_)
    fixed_out(c++) = column_value(col, attrs_[col.attribute], raw_values[col.attribute]);
  for (const auto& ic : interaction_cols_) {
    auto it = covariates.find(ic.covariate);
    if (it == covariates.end())
      throw ValidationError("missing covariate '" + ic.covariate + "' for interaction");
    fixed_out(c++) =
        column_value(ic.column, attrs_[ic.column.attribute], raw_values[ic.column.attribute]) *
        it->second;
  }
  for (int k = 0; k < static_cast<int>(random_cols_.size()); ++k) {
    const auto& col = random_cols_[k];
    random_out(k) = column_value(col, attrs_[col.attribute], raw_values[col.attribute]);
  }
}

ParameterLayout mnl_layout(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec) {
  RowBuilder builder(attrs, spec);
  ParameterLayout layout;
  layout.fixed_names = builder.fixed_names();
  layout.random_names = builder.random_names();
  layout.names = layout.fixed_names;
  layout.names.insert(layout.names.end(), layout.random_names.begin(),
                      layout.random_names.end());
  layout.has_spreads = false;
  return layout;
}

ParameterLayout mixl_layout(const std::vector<AttributeSpec>& attrs, const ModelSpec& spec) {
  ParameterLayout layout = mnl_layout(attrs, spec);
  layout.has_spreads = true;
  for (const auto& name : layout.random_names) layout.names.push_back("sd_" + name);
  return layout;
}

PanelData::PanelData(const ChoiceDataset& data, const ModelSpec& spec) {
  RowBuilder builder(data.attributes(), spec);
  fixed_names_ = builder.fixed_names();
  random_names_ = builder.random_names();
  n_alts_ = data.n_alternatives();

  // Listwise deletion: skip respondents missing any interaction covariate.
  std::set<int> dropped;
  for (int id : data.respondent_ids()) {
    for (const auto& cov : builder.interaction_covariates()) {
      auto it = data.covariates().find(id);
      const bool missing = it == data.covariates().end() ||
                           it->second.find(cov) == it->second.end() ||
                           std::isnan(it->second.at(cov));
      if (missing) {
        dropped.insert(id);
        break;
      }
    }
  }
  n_dropped_ = static_cast<int>(dropped.size());
  if (!dropped.empty() && dropped.size() == static_cast<std::size_t>(data.n_respondents()))
    throw ValidationError("all respondents miss an interaction covariate");

  int kept_tasks = 0;
  for (const auto& [begin, end] : data.tasks())
    if (!dropped.count(data.rows()[begin].respondent_id)) ++kept_tasks;

  const int rows = kept_tasks * n_alts_;
  x_fixed_.resize(rows, builder.n_fixed());
  x_random_.resize(rows, builder.n_random());
  task_chosen_.reserve(kept_tasks);
  resp_task_begin_.push_back(0);

  static const std::map<std::string, double> kNoCovariates;
  int row = 0;
  int current_resp = std::numeric_limits<int>::min();
  for (const auto& [begin, end] : data.tasks()) {
    const ChoiceRow& first = data.rows()[begin];
    if (dropped.count(first.respondent_id)) continue;
    if (first.respondent_id != current_resp) {
      if (current_resp != std::numeric_limits<int>::min())
        resp_task_begin_.push_back(static_cast<int>(task_chosen_.size()));
      current_resp = first.respondent_id;
      respondent_ids_.push_back(current_resp);
    }
    int chosen = -1;
    for (std::size_t k = begin; k < end; ++k) {
      const ChoiceRow& r = data.rows()[k];
      const std::map<std::string, double>* covs = &kNoCovariates;
      if (!builder.interaction_covariates().empty())
        covs = &data.covariates().at(r.respondent_id);
      builder.fill(r.alternative_id, r.values, *covs, x_fixed_.row(row),
                   x_random_.row(row));
      if (r.chosen == 1) chosen = static_cast<int>(k - begin);
      ++row;
    }
    task_chosen_.push_back(chosen);
  }
  resp_task_begin_.push_back(static_cast<int>(task_chosen_.size()));
  if (respondent_ids_.empty()) throw ValidationError("empty panel");
}

Eigen::MatrixXd PanelData::x_all() const {
  Eigen::MatrixXd x(n_rows(), x_fixed_.cols() + x_random_.cols());
  x << x_fixed_, x_random_;
  return x;
}

EstimationResult make_result(const ParameterLayout& layout, const Eigen::VectorXd& theta,
                             const Eigen::MatrixXd& covariance, double log_likelihood,
                             int n_observations, int n_respondents, bool converged,
                             int iterations) {
  EstimationResult res;
  res.parameter_names = layout.names;
  const int nf = layout.n_fixed();
  const int nr = layout.n_random();
  auto se = [&](int i) {
    if (covariance.rows() == 0) return 0.0;
    const double v = covariance(i, i);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  };
  for (int i = 0; i < nf; ++i)
    res.estimates[layout.fixed_names[i]] = {theta(i), se(i)};
  for (int i = 0; i < nr; ++i)
    res.estimates[layout.random_names[i]] = {theta(nf + i), se(nf + i)};
  if (layout.has_spreads) {
    for (int i = 0; i < nr; ++i)
      res.random_spreads[layout.random_names[i]] = {std::abs(theta(nf + nr + i)),
                                                    se(nf + nr + i)};
  }
  res.covariance = covariance;
  res.log_likelihood = log_likelihood;
  res.n_observations = n_observations;
  res.n_respondents = n_respondents;
  res.converged = converged;
  res.iterations = iterations;
  res.recompute_information_criteria();
  return res;
}

} // namespace dce
