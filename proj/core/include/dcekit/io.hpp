#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcekit/design.hpp"
#include "dcekit/types.hpp"

namespace dce {

/// The stock attribute grammar behind the standard choice CSV header
/// (resp_id,task_id,alt_id,chosen,origin,processing,harvesting,
/// certification,heritage,price): five binary dummies and a four-level
/// price ladder in euros.
std::vector<AttributeSpec> default_attributes();

// Choice data. Header contract:
//   resp_id,task_id,alt_id,chosen,<attribute names in spec order>
// with dummy level indices and continuous values in money units.
ChoiceDataset load_choice_csv(const std::string& path,
                              const std::vector<AttributeSpec>& attrs);
void write_choice_csv(const ChoiceDataset& data, const std::string& path);

// Respondent covariates. Header: resp_id,<name>,...; empty cells read as NaN.
CovariateTable load_covariates_csv(const std::string& path);
void write_covariates_csv(const CovariateTable& table,
                          const std::vector<std::string>& names, const std::string& path);

// Attitude survey. Header contract:
//   resp_id,q1..q16,age,female,tourist,education,income,fix_income,campaign,town
AttitudeDataset load_attitude_csv(const std::string& path);
void write_attitude_csv(const AttitudeDataset& data, const std::string& path);

// Estimation results, one file per fit:
//   kind,name,value,std_error
// with kinds fixed / random_mean / random_sd / stat / cov (upper triangle,
// names joined by ':'). Deterministic order; numbers at 12 significant
// digits, so write -> read -> write is byte-stable.
void write_result_csv(const EstimationResult& result, const std::string& path);
EstimationResult load_result_csv(const std::string& path);

// Designs: card_id,block_id,alt_id,<attribute names>; the baseline row is
// emitted explicitly with alt_id=C.
void write_design_csv(const DesignPlan& plan, const std::vector<AttributeSpec>& attrs,
                      const std::string& path);
DesignPlan load_design_csv(const std::string& path, const std::vector<AttributeSpec>& attrs,
                           const Eigen::VectorXd& prior = Eigen::VectorXd());

// Flat key=value text ('#' comments, blank lines ignored). Order-preserving;
// keys may repeat.
std::vector<std::pair<std::string, std::string>> load_keyvalue(const std::string& path);

// Model spec file keys: random, fixed, interactions (a*b, comma separated),
// asc (default "A,B"), draws, seed.
ModelSpec parse_model_spec(const std::vector<std::pair<std::string, std::string>>& kv);
ModelSpec load_model_spec(const std::string& path);

// Attribute grammar file: repeated
//   attribute = <name>, dummy, <level>, <level>[, ...]
//   attribute = <name>, continuous, <value>, <value>[, ...]
std::vector<AttributeSpec> parse_attributes(
    const std::vector<std::pair<std::string, std::string>>& kv);
std::vector<AttributeSpec> load_attributes(const std::string& path);

// Coefficient truth file for the generator: <parameter name> = <value>
// per line, names as in the mixed-logit layout.
std::map<std::string, double> load_named_values(const std::string& path);

} // namespace dce
