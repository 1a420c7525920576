#include <iostream>

#include "dcekit/io.hpp"
#include "dcekit/model.hpp"
#include "dcekit/synth.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

int run_simulate(const SimulateArgs& args) {
  const auto attrs = load_attrs_or_default(args.attributes);
  const dce::DesignPlan plan = dce::load_design_csv(args.design, attrs);
  const dce::ModelSpec spec = dce::load_model_spec(args.spec);

  const dce::ParameterLayout layout = dce::mixl_layout(attrs, spec);
  const auto named = dce::load_named_values(args.truth);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout.size());
  for (const auto& [name, value] : named) {
    const int idx = layout.index_of(name);
    if (idx < 0) throw dce::ValidationError("truth names unknown parameter '" + name + "'");
    theta(idx) = value;
  }

  dce::SynthConfig synth;
  if (!args.covariate_gens.empty()) {
    synth.covariates.clear();
    for (const auto& gen : args.covariate_gens) {
      const auto colon = gen.find(':');
      if (colon == std::string::npos)
        throw dce::ValidationError("covariate generator must be name:prob, got '" + gen +
                                   "'");
      synth.covariates.push_back(
          {gen.substr(0, colon), dce::parse_number(gen.substr(colon + 1))});
    }
  }

  const dce::ChoiceDataset data =
      dce::simulate_choices(plan, attrs, spec, theta, args.n_respondents, args.seed, synth);
  dce::write_choice_csv(data, args.out);
  if (!args.covariates_out.empty()) {
    std::vector<std::string> names;
    for (const auto& gen : synth.covariates) names.push_back(gen.name);
    dce::write_covariates_csv(data.covariates(), names, args.covariates_out);
  }
  std::cout << "respondents=" << data.n_respondents() << " tasks=" << data.n_tasks()
            << "\n";
  return kExitOk;
}

} // namespace dcetool
