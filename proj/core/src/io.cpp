#include "dcekit/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dcekit/model.hpp"

namespace dce {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path, 0);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing", path, 0);
  return out;
}

double field_number(const std::string& token, const std::string& path, long line) {
  try {
    return parse_number(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), path, line);
  }
}

int field_int(const std::string& token, const std::string& path, long line) {
  const double v = field_number(token, path, line);
  if (v != std::round(v)) throw ParseError("expected integer, got '" + token + "'", path, line);
  return static_cast<int>(v);
}

double field_number_or_nan(const std::string& token, const std::string& path, long line) {
  if (trim(token).empty()) return std::numeric_limits<double>::quiet_NaN();
  return field_number(token, path, line);
}

void expect_header(const std::string& got, const std::string& want,
                   const std::string& path) {
  if (trim(got) != want)
    throw ParseError("bad header: expected '" + want + "'", path, 1);
}

std::string num(double v) { return format_number(v); }

} // namespace

std::vector<AttributeSpec> default_attributes() {
  auto dummy = [](const std::string& name, const std::string& ref,
                  const std::string& high) {
    AttributeSpec a;
    a.name = name;
    a.levels = {ref, high};
    a.coding = AttributeCoding::kDummy;
    return a;
  };
  AttributeSpec price;
  price.name = "price";
  price.coding = AttributeCoding::kContinuous;
  price.levels = {"15", "23", "30", "35"};
  price.continuous_values = {15.0, 23.0, 30.0, 35.0};
  return {dummy("origin", "imported", "local"),
          dummy("processing", "frozen", "fresh"),
          dummy("harvesting", "foreign_vessel", "local_vessel"),
          dummy("certification", "none", "certified"),
          dummy("heritage", "waterfront_development", "fishing_heritage"),
          price};
}

ChoiceDataset load_choice_csv(const std::string& path,
                              const std::vector<AttributeSpec>& attrs) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", path, 0);

  std::string header = "resp_id,task_id,alt_id,chosen";
  for (const auto& a : attrs) header += "," + a.name;
  expect_header(lines[0], header, path);

  std::vector<ChoiceRow> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i + 1);
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4 + attrs.size())
      throw ParseError("expected " + std::to_string(4 + attrs.size()) + " fields, got " +
                       std::to_string(fields.size()), path, line_no);
    ChoiceRow row;
    row.respondent_id = field_int(fields[0], path, line_no);
    row.task_id = field_int(fields[1], path, line_no);
    row.alternative_id = trim(fields[2]);
    if (row.alternative_id.empty()) throw ParseError("empty alt_id", path, line_no);
    row.chosen = field_int(fields[3], path, line_no);
    row.values.reserve(attrs.size());
    for (std::size_t a = 0; a < attrs.size(); ++a)
      row.values.push_back(field_number(fields[4 + a], path, line_no));
    rows.push_back(std::move(row));
  }
  return ChoiceDataset(attrs, std::move(rows));
}

void write_choice_csv(const ChoiceDataset& data, const std::string& path) {
  auto out = open_out(path);
  out << "resp_id,task_id,alt_id,chosen";
  for (const auto& a : data.attributes()) out << "," << a.name;
  out << "\n";
  for (const auto& row : data.rows()) {
    out << row.respondent_id << "," << row.task_id << "," << row.alternative_id << ","
        << row.chosen;
    for (double v : row.values) out << "," << num(v);
    out << "\n";
  }
}

CovariateTable load_covariates_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", path, 0);
  const auto header = split(lines[0], ',');
  if (header.empty() || trim(header[0]) != "resp_id")
    throw ParseError("bad header: first column must be resp_id", path, 1);
  std::vector<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) names.push_back(trim(header[c]));

  CovariateTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i + 1);
    const auto fields = split(lines[i], ',');
    if (fields.size() != header.size())
      throw ParseError("field count mismatch", path, line_no);
    const int id = field_int(fields[0], path, line_no);
    auto& named = table[id];
    for (std::size_t c = 1; c < fields.size(); ++c)
      named[names[c - 1]] = field_number_or_nan(fields[c], path, line_no);
  }
  return table;
}

void write_covariates_csv(const CovariateTable& table,
                          const std::vector<std::string>& names, const std::string& path) {
  auto out = open_out(path);
  out << "resp_id";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  for (const auto& [id, named] : table) {
    out << id;
    for (const auto& n : names) {
      auto it = named.find(n);
      out << ",";
      if (it != named.end() && !std::isnan(it->second)) out << num(it->second);
    }
    out << "\n";
  }
}

namespace {
const std::string kAttitudeHeader =
    "resp_id,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11,q12,q13,q14,q15,q16,"
    "age,female,tourist,education,income,fix_income,campaign,town";
}

AttitudeDataset load_attitude_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", path, 0);
  expect_header(lines[0], kAttitudeHeader, path);

  AttitudeDataset data;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i + 1);
    const auto f = split(lines[i], ',');
    if (f.size() != 25) throw ParseError("expected 25 fields", path, line_no);
    AttitudeRow row;
    row.respondent_id = field_int(f[0], path, line_no);
    for (int q = 0; q < AttitudeDataset::kItems; ++q) {
      const int score = field_int(f[1 + q], path, line_no);
      row.items[q] = score;
    }
    row.age = field_number_or_nan(f[17], path, line_no);
    row.female = field_number_or_nan(f[18], path, line_no);
    row.tourist = field_number_or_nan(f[19], path, line_no);
    row.education = field_number_or_nan(f[20], path, line_no);
    row.income = field_number_or_nan(f[21], path, line_no);
    row.fix_income = field_number_or_nan(f[22], path, line_no);
    row.campaign = field_number_or_nan(f[23], path, line_no);
    row.town = trim(f[24]);
    data.respondents.push_back(std::move(row));
  }
  data.validate();
  return data;
}

void write_attitude_csv(const AttitudeDataset& data, const std::string& path) {
  auto out = open_out(path);
  out << kAttitudeHeader << "\n";
  auto cell = [&](double v) {
    out << ",";
    if (!std::isnan(v)) out << num(v);
  };
  for (const auto& r : data.respondents) {
    out << r.respondent_id;
    for (int s : r.items) out << "," << s;
    cell(r.age);
    cell(r.female);
    cell(r.tourist);
    cell(r.education);
    cell(r.income);
    cell(r.fix_income);
    cell(r.campaign);
    out << "," << r.town << "\n";
  }
}

void write_result_csv(const EstimationResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "kind,name,value,std_error\n";
  const auto is_spread_name = [&](const std::string& n) {
    return n.rfind("sd_", 0) == 0 && result.random_spreads.count(n.substr(3)) > 0;
  };
  for (const auto& name : result.parameter_names) {
    if (is_spread_name(name) || result.random_spreads.count(name)) continue;
    const auto& e = result.estimates.at(name);
    out << "fixed," << name << "," << num(e.value) << "," << num(e.std_error) << "\n";
  }
  for (const auto& name : result.parameter_names) {
    if (!result.random_spreads.count(name)) continue;
    const auto& e = result.estimates.at(name);
    out << "random_mean," << name << "," << num(e.value) << "," << num(e.std_error) << "\n";
  }
  for (const auto& name : result.parameter_names) {
    if (!result.random_spreads.count(name)) continue;
    const auto& e = result.random_spreads.at(name);
    out << "random_sd," << name << "," << num(e.value) << "," << num(e.std_error) << "\n";
  }
  out << "stat,log_likelihood," << num(result.log_likelihood) << ",\n";
  out << "stat,aic," << num(result.aic) << ",\n";
  out << "stat,bic," << num(result.bic) << ",\n";
  out << "stat,n_observations," << result.n_observations << ",\n";
  out << "stat,n_respondents," << result.n_respondents << ",\n";
  out << "stat,converged," << (result.converged ? 1 : 0) << ",\n";
  out << "stat,iterations," << result.iterations << ",\n";
  out << "stat,std_errors_reliable," << (result.std_errors_reliable ? 1 : 0) << ",\n";
  if (result.has_covariance()) {
    const auto& names = result.parameter_names;
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i; j < names.size(); ++j)
        out << "cov," << names[i] << ":" << names[j] << ","
            << num(result.covariance(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j)))
            << ",\n";
  }
}

EstimationResult load_result_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", path, 0);
  expect_header(lines[0], "kind,name,value,std_error", path);

  EstimationResult res;
  std::vector<std::string> fixed_names;
  std::vector<std::string> random_names;
  std::vector<std::pair<std::string, double>> cov_entries;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i + 1);
    const auto f = split(lines[i], ',');
    if (f.size() != 4) throw ParseError("expected 4 fields", path, line_no);
    const std::string kind = trim(f[0]);
    const std::string name = trim(f[1]);
    if (kind == "fixed" || kind == "random_mean") {
      Estimate e{field_number(f[2], path, line_no), field_number_or_nan(f[3], path, line_no)};
      if (std::isnan(e.std_error)) e.std_error = 0.0;
      res.estimates[name] = e;
      (kind == "fixed" ? fixed_names : random_names).push_back(name);
    } else if (kind == "random_sd") {
      Estimate e{field_number(f[2], path, line_no), field_number_or_nan(f[3], path, line_no)};
      if (std::isnan(e.std_error)) e.std_error = 0.0;
      res.random_spreads[name] = e;
    } else if (kind == "stat") {
      const double v = field_number(f[2], path, line_no);
      if (name == "log_likelihood") res.log_likelihood = v;
      else if (name == "aic") res.aic = v;
      else if (name == "bic") res.bic = v;
      else if (name == "n_observations") res.n_observations = static_cast<int>(v);
      else if (name == "n_respondents") res.n_respondents = static_cast<int>(v);
      else if (name == "converged") res.converged = v != 0.0;
      else if (name == "iterations") res.iterations = static_cast<int>(v);
      else if (name == "std_errors_reliable") res.std_errors_reliable = v != 0.0;
      else throw ParseError("unknown stat '" + name + "'", path, line_no);
    } else if (kind == "cov") {
      cov_entries.emplace_back(name, field_number(f[2], path, line_no));
    } else {
      throw ParseError("unknown kind '" + kind + "'", path, line_no);
    }
  }

  res.parameter_names = fixed_names;
  res.parameter_names.insert(res.parameter_names.end(), random_names.begin(),
                             random_names.end());
  for (const auto& n : random_names) res.parameter_names.push_back("sd_" + n);

  if (!cov_entries.empty()) {
    const int k = static_cast<int>(res.parameter_names.size());
    res.covariance = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [pair_name, value] : cov_entries) {
      const auto sep = pair_name.find(':');
      if (sep == std::string::npos) throw ParseError("bad cov pair '" + pair_name + "'", path, 0);
      const int a = res.parameter_index(pair_name.substr(0, sep));
      const int b = res.parameter_index(pair_name.substr(sep + 1));
      if (a < 0 || b < 0) throw ParseError("cov names unknown: '" + pair_name + "'", path, 0);
      res.covariance(a, b) = value;
      res.covariance(b, a) = value;
    }
  }
  return res;
}

void write_design_csv(const DesignPlan& plan, const std::vector<AttributeSpec>& attrs,
                      const std::string& path) {
  auto out = open_out(path);
  out << "card_id,block_id,alt_id";
  for (const auto& a : attrs) out << "," << a.name;
  out << "\n";
  const LevelVector baseline = baseline_levels(attrs);
  for (const auto& card : plan.cards) {
    const std::vector<std::pair<std::string, const LevelVector*>> alts = {
        {"A", &card.alternatives[0]}, {"B", &card.alternatives[1]}, {"C", &baseline}};
    for (const auto& [alt_id, levels] : alts) {
      out << card.card_id << "," << card.block_id << "," << alt_id;
      for (std::size_t a = 0; a < attrs.size(); ++a)
        out << "," << num(attrs[a].level_value((*levels)[a]));
      out << "\n";
    }
  }
}

DesignPlan load_design_csv(const std::string& path, const std::vector<AttributeSpec>& attrs,
                           const Eigen::VectorXd& prior) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", path, 0);
  std::string header = "card_id,block_id,alt_id";
  for (const auto& a : attrs) header += "," + a.name;
  expect_header(lines[0], header, path);

  std::map<int, ChoiceCard> cards;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i + 1);
    const auto f = split(lines[i], ',');
    if (f.size() != 3 + attrs.size()) throw ParseError("field count mismatch", path, line_no);
    const int card_id = field_int(f[0], path, line_no);
    const int block_id = field_int(f[1], path, line_no);
    const std::string alt_id = trim(f[2]);
    LevelVector levels(attrs.size());
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const double value = field_number(f[3 + a], path, line_no);
      const int idx = attrs[a].index_of_value(value);
      if (idx < 0)
        throw ParseError("value " + trim(f[3 + a]) + " is not a level of '" +
                         attrs[a].name + "'", path, line_no);
      levels[a] = idx;
    }
    auto& card = cards[card_id];
    card.card_id = card_id;
    card.block_id = block_id;
    if (alt_id == "C") continue; // baseline is implicit
    card.alternatives.push_back(std::move(levels));
  }

  DesignPlan plan;
  int max_block = 1;
  for (auto& [id, card] : cards) {
    if (card.alternatives.size() != 2)
      throw ParseError("card " + std::to_string(id) + " must have alternatives A and B",
                       path, 0);
    max_block = std::max(max_block, card.block_id);
    plan.cards.push_back(std::move(card));
  }
  if (plan.cards.empty()) throw ParseError("no cards in design file", path, 0);
  plan.n_blocks = max_block;
  plan.prior = prior.size() ? prior
                            : Eigen::VectorXd::Zero(
                                  static_cast<Eigen::Index>(expand_attribute_columns(attrs).size()));
  plan.d_error = score_d_error(plan.cards, attrs, plan.prior);
  plan.attribute_correlation = attribute_correlation(plan.cards, attrs);
  return plan;
}

std::vector<std::pair<std::string, std::string>> load_keyvalue(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::pair<std::string, std::string>> kv;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", path, static_cast<long>(i + 1));
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& tok : split(s, ',')) {
    const std::string t = trim(tok);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

} // namespace

ModelSpec parse_model_spec(const std::vector<std::pair<std::string, std::string>>& kv) {
  ModelSpec spec;
  bool saw_asc = false;
  for (const auto& [key, value] : kv) {
    if (key == "random") {
      spec.random_coefficients = split_list(value);
    } else if (key == "fixed") {
      spec.fixed_coefficients = split_list(value);
    } else if (key == "interactions") {
      for (const auto& term : split_list(value)) {
        const auto star = term.find('*');
        if (star == std::string::npos)
          throw ValidationError("interaction '" + term + "' must be attribute*covariate");
        spec.interactions.emplace_back(trim(term.substr(0, star)),
                                       trim(term.substr(star + 1)));
      }
    } else if (key == "asc") {
      spec.asc_alternatives = split_list(value);
      saw_asc = true;
    } else if (key == "draws") {
      spec.n_draws = static_cast<int>(parse_number(value));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_number(value));
    } else {
      throw ValidationError("unknown model spec key '" + key + "'");
    }
  }
  if (!saw_asc) spec.asc_alternatives = {"A", "B"};
  spec.validate();
  return spec;
}

ModelSpec load_model_spec(const std::string& path) {
  return parse_model_spec(load_keyvalue(path));
}

std::vector<AttributeSpec> parse_attributes(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<AttributeSpec> attrs;
  for (const auto& [key, value] : kv) {
    if (key != "attribute")
      throw ValidationError("unknown attributes file key '" + key + "'");
    const auto parts = split_list(value);
    if (parts.size() < 4)
      throw ValidationError("attribute needs: name, coding, and >= 2 levels");
    AttributeSpec a;
    a.name = parts[0];
    if (parts[1] == "dummy") {
      a.coding = AttributeCoding::kDummy;
      a.levels.assign(parts.begin() + 2, parts.end());
    } else if (parts[1] == "continuous") {
      a.coding = AttributeCoding::kContinuous;
      for (std::size_t i = 2; i < parts.size(); ++i) {
        a.levels.push_back(parts[i]);
        a.continuous_values.push_back(parse_number(parts[i]));
      }
    } else {
      throw ValidationError("attribute coding must be dummy or continuous, got '" +
                            parts[1] + "'");
    }
    a.validate();
    attrs.push_back(std::move(a));
  }
  if (attrs.empty()) throw ValidationError("attributes file declares no attributes");
  return attrs;
}

std::vector<AttributeSpec> load_attributes(const std::string& path) {
  return parse_attributes(load_keyvalue(path));
}

std::map<std::string, double> load_named_values(const std::string& path) {
  std::map<std::string, double> out;
  for (const auto& [key, value] : load_keyvalue(path)) out[key] = parse_number(value);
  return out;
}

} // namespace dce
