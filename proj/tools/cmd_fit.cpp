#include <iostream>

#include "dcekit/io.hpp"
#include "dcekit/mixl.hpp"
#include "dcekit/mnl.hpp"
#include "dcekit/parallel.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

int run_fit(const FitArgs& args) {
  const dce::ChoiceDataset data = load_dataset(args.data, args.attributes, args.covariates);
  dce::ModelSpec spec = dce::load_model_spec(args.spec);
  if (args.draws >= 0) spec.n_draws = args.draws;
  if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);
  const int threads = args.threads > 0 ? args.threads : dce::default_threads();

  dce::EstimationResult result;
  if (args.model == "mnl") {
    dce::MnlConfig config;
    config.threads = threads;
    result = dce::fit_mnl(data, spec, config);
  } else if (args.model == "mixl") {
    dce::MixlConfig config;
    config.n_draws = spec.n_draws;
    config.seed = spec.seed;
    config.threads = threads;
    result = dce::fit_mixl(data, spec, config);
  } else {
    throw dce::ValidationError("--model must be mnl or mixl");
  }

  dce::write_result_csv(result, args.out);
  std::cout << "log_likelihood=" << dce::format_number(result.log_likelihood) << "\n"
            << "aic=" << dce::format_number(result.aic) << "\n"
            << "bic=" << dce::format_number(result.bic) << "\n";
  if (!result.converged) {
    std::cerr << "warning: estimation did not converge; result written anyway\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

} // namespace dcetool
