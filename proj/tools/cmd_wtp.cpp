#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dcekit/io.hpp"
#include "dcekit/model.hpp"
#include "dcekit/wtp.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

namespace {

// Attribute-like coefficients: everything but ASCs and the price itself.
std::vector<std::string> reportable(const dce::EstimationResult& result) {
  std::vector<std::string> out;
  for (const auto& name : result.parameter_names) {
    if (name.rfind("asc_", 0) == 0 || name == "price") continue;
    if (name.rfind("sd_", 0) == 0 && result.random_spreads.count(name.substr(3))) continue;
    out.push_back(name);
  }
  return out;
}

} // namespace

int run_wtp(const WtpArgs& args) {
  const dce::EstimationResult result = dce::load_result_csv(args.result);
  if (!result.has_covariance())
    throw dce::ValidationError("result file lacks covariance rows; re-run fit");

  std::filesystem::create_directories(args.out_dir);
  const std::string report_path = args.out_dir + "/wtp.csv";
  std::ofstream report(report_path);
  if (!report) throw dce::ParseError("cannot open for writing", report_path, 0);

  report << "attribute,mean_wtp,se_mean,sd_wtp,se_sd,positive_share\n";
  for (const auto& name : reportable(result)) {
    const dce::WtpPoint point = dce::wtp_point(result, name);
    const double se_mean = dce::wtp_se_delta(result, name);
    const bool random = result.random_spreads.count(name) > 0;
    const double se_sd = random ? dce::wtp_sd_se_delta(result, name) : 0.0;
    report << name << "," << dce::format_number(point.mean_wtp) << ","
           << dce::format_number(se_mean) << "," << dce::format_number(point.sd_wtp) << ","
           << dce::format_number(se_sd) << ","
           << dce::format_number(dce::positive_share(point.mean_wtp, point.sd_wtp)) << "\n";
  }
  report.close();

  if (!args.density.empty()) {
    const dce::ChoiceDataset data =
        load_dataset(args.data, args.attributes, args.covariates);
    dce::ModelSpec spec = dce::load_model_spec(args.spec);
    if (args.draws >= 0) spec.n_draws = args.draws;
    if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);

    const dce::PanelData panel(data, spec);
    const dce::DrawMatrix draws =
        dce::make_draws(panel.n_respondents(), spec.n_draws,
                        static_cast<int>(panel.x_random().cols()),
                        {dce::DrawGenerator::kHalton, 50, spec.seed});
    const auto individual = dce::individual_wtp(result, data, spec, draws, args.density);

    std::vector<double> values;
    values.reserve(individual.size());
    for (const auto& [id, wtp] : individual) values.push_back(wtp);
    const double bw = dce::silverman_bandwidth(values);
    dce::DensityGrid grid;
    grid.min = *std::min_element(values.begin(), values.end()) - 3.0 * bw;
    grid.max = *std::max_element(values.begin(), values.end()) + 3.0 * bw;
    grid.points = args.grid_points;

    const std::string density_path = args.out_dir + "/density_" + args.density + ".csv";
    std::ofstream density(density_path);
    if (!density) throw dce::ParseError("cannot open for writing", density_path, 0);
    density << "x,density\n";
    for (const auto& [x, d] : dce::kernel_density(values, grid))
      density << dce::format_number(x) << "," << dce::format_number(d) << "\n";
  }

  std::cout << "wtp_report=" << report_path << "\n";
  return kExitOk;
}

} // namespace dcetool
