#include "dcekit/wtp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcekit/stats.hpp"

namespace dce {

namespace {

double price_coefficient(const EstimationResult& result, const std::string& price_name) {
  if (result.random_spreads.count(price_name))
    throw ValidationError("WTP requires a fixed price coefficient; '" + price_name +
                          "' is random");
  const double beta_price = result.coefficient(price_name).value;
  if (std::abs(beta_price) < 1e-6)
    throw NumericalError("WTP undefined: |price coefficient| < 1e-6");
  return beta_price;
}

} // namespace

WtpPoint wtp_point(const EstimationResult& result, const std::string& attribute,
                   const std::string& price_name) {
  const double beta_price = price_coefficient(result, price_name);
  const double beta_attr = result.coefficient(attribute).value;
  WtpPoint out;
  out.mean_wtp = beta_attr / std::abs(beta_price);
  auto it = result.random_spreads.find(attribute);
  out.sd_wtp = it == result.random_spreads.end()
                   ? 0.0
                   : std::abs(it->second.value) / std::abs(beta_price);
  return out;
}

double wtp_se_delta(const EstimationResult& result, const std::string& attribute,
                    const std::string& price_name) {
  if (!result.has_covariance()) throw ValidationError("result carries no covariance");
  const double bp = price_coefficient(result, price_name);
  const double ba = result.coefficient(attribute).value;
  // g = ba/|bp|: dg/dba = 1/|bp|, dg/dbp = -ba*sign(bp)/bp^2
  const double da = 1.0 / std::abs(bp);
  const double dp = -ba * (bp >= 0 ? 1.0 : -1.0) / (bp * bp);
  const double var = da * da * result.covariance_between(attribute, attribute) +
                     2.0 * da * dp * result.covariance_between(attribute, price_name) +
                     dp * dp * result.covariance_between(price_name, price_name);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

double wtp_sd_se_delta(const EstimationResult& result, const std::string& attribute,
                       const std::string& price_name) {
  if (!result.has_covariance()) throw ValidationError("result carries no covariance");
  if (!result.random_spreads.count(attribute))
    throw ValidationError("'" + attribute + "' has no spread parameter");
  const double bp = price_coefficient(result, price_name);
  const double sd = result.random_spreads.at(attribute).value; // >= 0 after fit
  const std::string sd_name = "sd_" + attribute;
  const double ds = 1.0 / std::abs(bp);
  const double dp = -sd * (bp >= 0 ? 1.0 : -1.0) / (bp * bp);
  const double var = ds * ds * result.covariance_between(sd_name, sd_name) +
                     2.0 * ds * dp * result.covariance_between(sd_name, price_name) +
                     dp * dp * result.covariance_between(price_name, price_name);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

double positive_share(double mean_wtp, double sd_wtp) {
  if (sd_wtp < 0.0) throw ValidationError("positive_share: sd must be >= 0");
  if (sd_wtp == 0.0) {
    if (mean_wtp > 0.0) return 1.0;
    if (mean_wtp < 0.0) return 0.0;
    return 0.5;
  }
  return stats::normal_cdf(mean_wtp / sd_wtp);
}

std::vector<std::pair<int, double>> individual_wtp(const EstimationResult& result,
                                                   const ChoiceDataset& data,
                                                   const ModelSpec& spec,
                                                   const DrawMatrix& draws,
                                                   const std::string& attribute,
                                                   const std::string& price_name) {
  const double abs_price = std::abs(price_coefficient(result, price_name));
  PanelData panel(data, spec);

  const int F = static_cast<int>(panel.x_fixed().cols());
  const int R = static_cast<int>(panel.x_random().cols());
  const int J = panel.n_alternatives();
  const int D = draws.n_draws();

  Eigen::VectorXd fixed(F);
  for (int i = 0; i < F; ++i) fixed(i) = result.coefficient(panel.fixed_names()[i]).value;
  Eigen::VectorXd means(R);
  Eigen::VectorXd sds(R);
  int attr_random = -1;
  for (int i = 0; i < R; ++i) {
    const std::string& name = panel.random_names()[i];
    means(i) = result.coefficient(name).value;
    sds(i) = result.random_spreads.at(name).value;
    if (name == attribute) attr_random = i;
  }
  double attr_fixed_value = 0.0;
  if (attr_random < 0) attr_fixed_value = result.coefficient(attribute).value;

  const Eigen::VectorXd u_fixed = panel.x_fixed() * fixed;

  std::vector<std::pair<int, double>> out;
  out.reserve(panel.n_respondents());
  for (int r = 0; r < panel.n_respondents(); ++r) {
    Eigen::MatrixXd b = sds.asDiagonal() * draws.respondent_block(r);
    b.colwise() += means;
    Eigen::VectorXd log_w = Eigen::VectorXd::Zero(D);
    for (int t = panel.resp_task_begin(r); t < panel.resp_task_begin(r + 1); ++t) {
      const int row0 = panel.task_row_begin(t);
      for (int d = 0; d < D; ++d) {
        double max_u = -std::numeric_limits<double>::infinity();
        double u_chosen = 0.0;
        Eigen::VectorXd u(J);
        for (int j = 0; j < J; ++j) {
          u(j) = u_fixed(row0 + j) + panel.x_random().row(row0 + j).dot(b.col(d));
          max_u = std::max(max_u, u(j));
        }
        u_chosen = u(panel.task_chosen(t));
        log_w(d) += (u_chosen - max_u) - std::log((u.array() - max_u).exp().sum());
      }
    }
    // Softmax the panel-likelihood weights in the log domain.
    const double m = log_w.maxCoeff();
    Eigen::VectorXd w = (log_w.array() - m).exp();
    w /= w.sum();
    double post_mean;
    if (attr_random >= 0) {
      post_mean = b.row(attr_random).dot(w);
    } else {
      post_mean = attr_fixed_value;
    }
    out.emplace_back(panel.respondent_ids()[r], post_mean / abs_price);
  }
  return out;
}

double silverman_bandwidth(const std::vector<double>& values) {
  const double sd = stats::sample_sd(values);
  const double iqr = stats::quantile(values, 0.75) - stats::quantile(values, 0.25);
  double scale = sd;
  if (iqr > 0.0) scale = std::min(sd, iqr / 1.34);
  return 0.9 * scale * std::pow(static_cast<double>(values.size()), -0.2);
}

std::vector<std::pair<double, double>> kernel_density(const std::vector<double>& values,
                                                      const DensityGrid& grid) {
  if (values.size() < 2) throw ValidationError("kernel_density: need >= 2 values");
  bool distinct = false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] != values[0]) {
      distinct = true;
      break;
    }
  if (!distinct) throw ValidationError("kernel_density: degenerate sample (all equal)");
  if (grid.points < 2 || !(grid.max > grid.min))
    throw ValidationError("kernel_density: bad grid");

  const double h = silverman_bandwidth(values);
  const double n = static_cast<double>(values.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.points);
  const double step = (grid.max - grid.min) / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i) {
    const double x = grid.min + step * i;
    double density = 0.0;
    for (double v : values) density += stats::normal_pdf((x - v) / h);
    out.emplace_back(x, density / (n * h));
  }
  return out;
}

} // namespace dce
