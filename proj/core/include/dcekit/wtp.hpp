#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dcekit/draws.hpp"
#include "dcekit/model.hpp"
#include "dcekit/types.hpp"

namespace dce {

struct WtpPoint {
  double mean_wtp = 0.0;
  double sd_wtp = 0.0;
};

/// Money-metric trade-off for an attribute: beta_attr / |beta_price|, the
/// spread scaled the same way. The price coefficient must be fixed and
/// bounded away from zero (|.| >= 1e-6).
WtpPoint wtp_point(const EstimationResult& result, const std::string& attribute,
                   const std::string& price_name = "price");

/// First-order delta-method standard error of the mean WTP ratio.
double wtp_se_delta(const EstimationResult& result, const std::string& attribute,
                    const std::string& price_name = "price");

/// Delta-method standard error of the WTP spread |sd_attr| / |beta_price|.
double wtp_sd_se_delta(const EstimationResult& result, const std::string& attribute,
                       const std::string& price_name = "price");

/// Share of the population with positive WTP under the normal mixing
/// assumption: Phi(mean/sd); a zero sd degenerates to a step.
double positive_share(double mean_wtp, double sd_wtp);

/// Posterior (conditional-on-choices) mean WTP per respondent: coefficient
/// draws reweighted by each respondent's panel likelihood, divided by
/// |beta_price|. Weights are formed in the log domain, so they never
/// collapse to all zeros.
std::vector<std::pair<int, double>> individual_wtp(const EstimationResult& result,
                                                   const ChoiceDataset& data,
                                                   const ModelSpec& spec,
                                                   const DrawMatrix& draws,
                                                   const std::string& attribute,
                                                   const std::string& price_name = "price");

struct DensityGrid {
  double min = 0.0;
  double max = 0.0;
  int points = 512;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5); falls back to the sd alone when the
/// IQR is degenerate.
double silverman_bandwidth(const std::vector<double>& values);

/// Gaussian kernel density on an evenly spaced grid. Needs >= 2 distinct
/// values.
std::vector<std::pair<double, double>> kernel_density(const std::vector<double>& values,
                                                      const DensityGrid& grid);

} // namespace dce
