#include "helpers.hpp"

#include "dcekit/design.hpp"
#include "dcekit/model.hpp"

namespace fixtures {

dce::EstimationResult table5_result() {
  dce::EstimationResult res;
  const std::vector<std::string> fixed = {"asc_a", "asc_b", "price"};
  const std::vector<std::string> random = {"origin", "processing", "harvesting",
                                           "certification", "heritage"};
  const std::vector<double> fixed_values = {1.361, 1.580, -0.090};
  const std::vector<double> fixed_se = {0.2, 0.2, 0.01};
  const std::vector<double> means = {0.965, 0.624, 0.938, 1.215, 0.454};
  const std::vector<double> mean_se = {0.15, 0.14, 0.14, 0.16, 0.13};
  const std::vector<double> sds = {1.028, 0.767, 1.069, 1.150, 0.829};
  const std::vector<double> sd_se = {0.2, 0.25, 0.2, 0.21, 0.22};

  for (std::size_t i = 0; i < fixed.size(); ++i) {
    res.parameter_names.push_back(fixed[i]);
    res.estimates[fixed[i]] = {fixed_values[i], fixed_se[i]};
  }
  for (std::size_t i = 0; i < random.size(); ++i) {
    res.parameter_names.push_back(random[i]);
    res.estimates[random[i]] = {means[i], mean_se[i]};
  }
  for (std::size_t i = 0; i < random.size(); ++i) {
    res.parameter_names.push_back("sd_" + random[i]);
    res.random_spreads[random[i]] = {sds[i], sd_se[i]};
  }

  const int k = static_cast<int>(res.parameter_names.size());
  res.covariance = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const std::string& name = res.parameter_names[i];
    double se = 0.0;
    if (res.estimates.count(name)) {
      se = res.estimates.at(name).std_error;
    } else {
      se = res.random_spreads.at(name.substr(3)).std_error;
    }
    res.covariance(i, i) = se * se;
  }
  res.log_likelihood = -1366.350;
  res.n_observations = 1636;
  res.n_respondents = 409;
  res.converged = true;
  res.iterations = 1;
  res.recompute_information_criteria();
  return res;
}

dce::ChoiceDataset random_dataset(const std::vector<dce::AttributeSpec>& attrs, int n_resp,
                                  int n_tasks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<dce::ChoiceRow> rows;
  const std::vector<std::string> alt_ids = {"A", "B", "C"};
  for (int r = 1; r <= n_resp; ++r) {
    for (int t = 1; t <= n_tasks; ++t) {
      std::uniform_int_distribution<int> pick_chosen(0, 2);
      const int chosen = pick_chosen(rng);
      for (int j = 0; j < 3; ++j) {
        dce::ChoiceRow row;
        row.respondent_id = r;
        row.task_id = t;
        row.alternative_id = alt_ids[j];
        row.chosen = j == chosen ? 1 : 0;
        for (const auto& a : attrs) {
          std::uniform_int_distribution<int> pick_level(0, a.n_levels() - 1);
          row.values.push_back(a.level_value(pick_level(rng)));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return dce::ChoiceDataset(attrs, std::move(rows));
}

dce::DesignPlan paper_plan(std::uint64_t seed) {
  const auto attrs = paper_attrs();
  dce::DesignConfig config;
  config.seed = seed;
  return dce::optimize_design(dce::full_factorial(attrs), attrs, config);
}

} // namespace fixtures
