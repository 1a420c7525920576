#include "cli_util.hpp"

namespace dcetool {

std::vector<dce::AttributeSpec> load_attrs_or_default(const std::string& path) {
  if (path.empty()) return dce::default_attributes();
  return dce::load_attributes(path);
}

dce::CovariateTable merge_covariates(const std::vector<std::string>& paths) {
  dce::CovariateTable merged;
  for (const auto& path : paths) {
    for (auto& [id, named] : dce::load_covariates_csv(path))
      for (auto& [name, value] : named) merged[id][name] = value;
  }
  return merged;
}

dce::ChoiceDataset load_dataset(const std::string& data_path,
                                const std::string& attrs_path,
                                const std::vector<std::string>& covariate_paths) {
  const auto attrs = load_attrs_or_default(attrs_path);
  dce::ChoiceDataset data = dce::load_choice_csv(data_path, attrs);
  if (!covariate_paths.empty())
    data = data.with_covariates(merge_covariates(covariate_paths));
  return data;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const dce::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dce::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const dce::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

} // namespace dcetool
