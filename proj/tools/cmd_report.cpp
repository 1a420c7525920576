#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dcekit/io.hpp"
#include "dcekit/mixl.hpp"
#include "dcekit/mnl.hpp"
#include "dcekit/parallel.hpp"
#include "dcekit/wtp.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

namespace {

struct FitBundle {
  dce::EstimationResult result;
  std::vector<std::string> attributes; // reportable coefficient names
};

FitBundle fit_once(const dce::ChoiceDataset& data, const dce::ModelSpec& spec,
                   const std::string& model, int threads) {
  FitBundle bundle;
  if (model == "mnl") {
    dce::MnlConfig config;
    config.threads = threads;
    bundle.result = dce::fit_mnl(data, spec, config);
  } else {
    dce::MixlConfig config;
    config.n_draws = spec.n_draws;
    config.seed = spec.seed;
    config.threads = threads;
    bundle.result = dce::fit_mixl(data, spec, config);
  }
  for (const auto& name : bundle.result.parameter_names) {
    if (name.rfind("asc_", 0) == 0 || name == "price") continue;
    if (name.rfind("sd_", 0) == 0 && bundle.result.random_spreads.count(name.substr(3)))
      continue;
    bundle.attributes.push_back(name);
  }
  return bundle;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace

int run_report(const ReportArgs& args) {
  const dce::ChoiceDataset data = load_dataset(args.data, args.attributes, args.covariates);
  dce::ModelSpec spec = dce::load_model_spec(args.spec);
  if (args.draws >= 0) spec.n_draws = args.draws;
  if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);
  const int threads = args.threads > 0 ? args.threads : dce::default_threads();

  std::ostringstream out;
  const FitBundle full = fit_once(data, spec, args.model, threads);
  const auto& res = full.result;

  out << "model=" << args.model << " draws=" << spec.n_draws << " seed=" << spec.seed
      << "\n";
  out << "respondents=" << res.n_respondents << " choice_situations=" << res.n_observations
      << " converged=" << (res.converged ? "yes" : "no") << " iterations=" << res.iterations
      << "\n";
  out << "log_likelihood=" << dce::format_number(res.log_likelihood) << "\n";
  out << "aic=" << dce::format_number(res.aic) << "\n";
  out << "bic=" << dce::format_number(res.bic) << "\n\n";

  out << "coefficients\n";
  out << pad("name", 28) << pad("estimate", 16) << "std_error\n";
  for (const auto& name : res.parameter_names) {
    const bool spread =
        name.rfind("sd_", 0) == 0 && res.random_spreads.count(name.substr(3)) > 0;
    const dce::Estimate e =
        spread ? res.random_spreads.at(name.substr(3)) : res.estimates.at(name);
    out << pad(name, 28) << pad(dce::format_number(e.value), 16)
        << dce::format_number(e.std_error) << "\n";
  }
  out << "\n";

  out << "wtp\n";
  out << pad("attribute", 28) << pad("mean_wtp", 14) << pad("se_mean", 14)
      << pad("sd_wtp", 14) << pad("positive_share", 16) << "\n";
  for (const auto& name : full.attributes) {
    const dce::WtpPoint point = dce::wtp_point(res, name);
    out << pad(name, 28) << pad(dce::format_number(point.mean_wtp), 14)
        << pad(dce::format_number(dce::wtp_se_delta(res, name)), 14)
        << pad(dce::format_number(point.sd_wtp), 14)
        << pad(dce::format_number(dce::positive_share(point.mean_wtp, point.sd_wtp)), 16)
        << "\n";
  }
  out << "\n";

  if (!args.splits.empty()) {
    // One column per indicator value, Table-9 style.
    std::vector<std::string> group_names;
    std::vector<std::map<std::string, double>> group_wtp;
    std::vector<std::string> warnings;

    for (const auto& split : args.splits) {
      for (const int value : {1, 0}) {
        const std::string label = split + "=" + std::to_string(value);
        const dce::ChoiceDataset subset = data.filter_respondents([&](int id) {
          const auto it = data.covariates().find(id);
          if (it == data.covariates().end()) return false;
          const auto jt = it->second.find(split);
          if (jt == it->second.end() || std::isnan(jt->second)) return false;
          return static_cast<int>(jt->second) == value;
        });
        if (subset.n_respondents() < args.min_group) {
          warnings.push_back("subgroup " + label + " skipped: " +
                             std::to_string(subset.n_respondents()) + " respondents (< " +
                             std::to_string(args.min_group) + ")");
          continue;
        }
        const FitBundle sub = fit_once(subset, spec, args.model, threads);
        group_names.push_back(label);
        std::map<std::string, double> wtp;
        for (const auto& name : sub.attributes)
          wtp[name] = dce::wtp_point(sub.result, name).mean_wtp;
        group_wtp.push_back(std::move(wtp));
      }
    }

    out << "subgroup wtp means\n";
    out << pad("attribute", 28);
    for (const auto& g : group_names) out << pad(g, 18);
    out << "\n";
    for (const auto& name : full.attributes) {
      out << pad(name, 28);
      for (const auto& wtp : group_wtp) {
        const auto it = wtp.find(name);
        out << pad(it == wtp.end() ? "-" : dce::format_number(it->second), 18);
      }
      out << "\n";
    }
    for (const auto& w : warnings) {
      out << "warning: " << w << "\n";
      std::cerr << "warning: " << w << "\n";
    }
  }

  std::ofstream file(args.out);
  if (!file) throw dce::ParseError("cannot open for writing", args.out, 0);
  file << out.str();
  std::cout << "report=" << args.out << "\n";
  return kExitOk;
}

} // namespace dcetool
