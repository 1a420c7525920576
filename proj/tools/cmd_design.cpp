#include <iostream>

#include "dcekit/design.hpp"
#include "dcekit/io.hpp"
#include "dcekit/model.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

int run_design(const DesignArgs& args) {
  const auto attrs = load_attrs_or_default(args.attributes);
  const auto candidates = dce::full_factorial(attrs);

  dce::DesignConfig config;
  config.n_cards = args.cards;
  config.n_blocks = args.blocks;
  config.seed = args.seed;
  config.max_sweeps = args.max_sweeps;
  if (!args.prior.empty()) {
    const auto named = dce::load_named_values(args.prior);
    const auto columns = dce::expand_attribute_columns(attrs);
    config.prior = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(columns.size()));
    for (const auto& [name, value] : named) {
      bool found = false;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) {
          config.prior(static_cast<Eigen::Index>(i)) = value;
          found = true;
          break;
        }
      }
      if (!found) throw dce::ValidationError("prior names unknown column '" + name + "'");
    }
  }

  const dce::DesignPlan plan = dce::optimize_design(candidates, attrs, config);
  dce::write_design_csv(plan, attrs, args.out);
  std::cout << "d_error=" << dce::format_number(plan.d_error) << "\n";
  return kExitOk;
}

} // namespace dcetool
