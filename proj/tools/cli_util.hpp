#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "dcekit/io.hpp"
#include "dcekit/types.hpp"

namespace dcetool {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

/// Attribute grammar from --attributes, or the stock grammar of the
/// standard choice CSV when the flag was not given.
std::vector<dce::AttributeSpec> load_attrs_or_default(const std::string& path);

/// Union of one or more covariate CSVs (later files win per respondent).
dce::CovariateTable merge_covariates(const std::vector<std::string>& paths);

dce::ChoiceDataset load_dataset(const std::string& data_path,
                                const std::string& attrs_path,
                                const std::vector<std::string>& covariate_paths);

/// Runs a command body, mapping domain errors to the exit-code contract
/// (0 ok, 2 bad input, 3 non-convergence).
int guarded(const std::function<int()>& body);

} // namespace dcetool
