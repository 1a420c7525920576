#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dcekit/io.hpp"
#include "dcekit/types.hpp"
#include "helpers.hpp"

using namespace dce;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

} // namespace

TEST(AttributeSpec, RejectsBadGrammars) {
  AttributeSpec a = fixtures::binary_attr("x");
  a.levels = {"only"};
  EXPECT_THROW(a.validate(), ValidationError);

  a = fixtures::binary_attr("x");
  a.levels = {"dup", "dup"};
  EXPECT_THROW(a.validate(), ValidationError);

  AttributeSpec price;
  price.name = "price";
  price.coding = AttributeCoding::kContinuous;
  price.levels = {"a", "b"};
  price.continuous_values = {20.0, 15.0}; // not increasing
  EXPECT_THROW(price.validate(), ValidationError);
}

TEST(ChoiceDataset, MinimalWellFormedFile) {
  const auto attrs = fixtures::paper_attrs();
  const std::string path = temp_path("dcekit_min.csv");
  write_file(path,
             "resp_id,task_id,alt_id,chosen,origin,processing,harvesting,certification,"
             "heritage,price\n"
             "1,1,A,0,1,0,1,0,1,23\n"
             "1,1,B,1,0,1,0,1,0,30\n"
             "1,1,C,0,0,0,0,0,0,15\n");
  const ChoiceDataset data = load_choice_csv(path, attrs);
  EXPECT_EQ(data.n_respondents(), 1);
  EXPECT_EQ(data.n_tasks(), 1);
  EXPECT_EQ(data.n_alternatives(), 3);
}

TEST(ChoiceDataset, DoubleChosenIsLocatedValidationError) {
  const auto attrs = fixtures::paper_attrs();
  const std::string path = temp_path("dcekit_dup.csv");
  write_file(path,
             "resp_id,task_id,alt_id,chosen,origin,processing,harvesting,certification,"
             "heritage,price\n"
             "7,3,A,1,1,0,1,0,1,23\n"
             "7,3,B,1,0,1,0,1,0,30\n"
             "7,3,C,0,0,0,0,0,0,15\n");
  try {
    load_choice_csv(path, attrs);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("respondent 7"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("task 3"), std::string::npos);
  }
}

TEST(ChoiceDataset, MalformedRowIsParseErrorWithLine) {
  const auto attrs = fixtures::paper_attrs();
  const std::string path = temp_path("dcekit_bad.csv");
  write_file(path,
             "resp_id,task_id,alt_id,chosen,origin,processing,harvesting,certification,"
             "heritage,price\n"
             "1,1,A,zero,1,0,1,0,1,23\n");
  try {
    load_choice_csv(path, attrs);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ChoiceDataset, UndeclaredLevelRejected) {
  const auto attrs = fixtures::paper_attrs();
  const std::string path = temp_path("dcekit_level.csv");
  write_file(path,
             "resp_id,task_id,alt_id,chosen,origin,processing,harvesting,certification,"
             "heritage,price\n"
             "1,1,A,1,1,0,1,0,1,24\n" // 24 is not a price level
             "1,1,B,0,0,1,0,1,0,30\n"
             "1,1,C,0,0,0,0,0,0,15\n");
  EXPECT_THROW(load_choice_csv(path, attrs), ValidationError);
}

TEST(ChoiceDataset, PaperSizedPanel) {
  // 409 respondents x 4 tasks x 3 alternatives = 4908 rows.
  const auto attrs = fixtures::paper_attrs();
  const ChoiceDataset data = fixtures::random_dataset(attrs, 409, 4, 99);
  EXPECT_EQ(data.n_respondents(), 409);
  EXPECT_EQ(data.n_tasks(), 409 * 4);
  EXPECT_EQ(data.rows().size(), 4908u);
}

TEST(ChoiceCsv, RoundTripsGeneratedDatasets) {
  const auto attrs = fixtures::paper_attrs();
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const ChoiceDataset data = fixtures::random_dataset(attrs, 23, 3, seed);
    const std::string path = temp_path("dcekit_rt.csv");
    write_choice_csv(data, path);
    const ChoiceDataset back = load_choice_csv(path, attrs);
    ASSERT_EQ(back.rows().size(), data.rows().size());
    for (std::size_t i = 0; i < data.rows().size(); ++i) {
      EXPECT_EQ(back.rows()[i].respondent_id, data.rows()[i].respondent_id);
      EXPECT_EQ(back.rows()[i].task_id, data.rows()[i].task_id);
      EXPECT_EQ(back.rows()[i].alternative_id, data.rows()[i].alternative_id);
      EXPECT_EQ(back.rows()[i].chosen, data.rows()[i].chosen);
      EXPECT_EQ(back.rows()[i].values, data.rows()[i].values);
    }
  }
}

TEST(ModelSpecType, FixedAndRandomAreExclusive) {
  ModelSpec spec;
  spec.fixed_coefficients = {"price", "origin"};
  spec.random_coefficients = {"origin"};
  EXPECT_THROW(spec.validate(), ValidationError);
}

TEST(ResultCsv, AscOnlyModelHasTwoCoefficientRows) {
  EstimationResult res;
  res.parameter_names = {"asc_a", "asc_b"};
  res.estimates["asc_a"] = {0.1, 0.02};
  res.estimates["asc_b"] = {-0.2, 0.03};
  res.log_likelihood = -10.0;
  res.n_observations = 9;
  res.n_respondents = 3;
  res.converged = true;
  res.recompute_information_criteria();
  const std::string path = temp_path("dcekit_res2.csv");
  write_result_csv(res, path);

  int coef_rows = 0;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("fixed,", 0) == 0) ++coef_rows;
  EXPECT_EQ(coef_rows, 2);
}

TEST(ResultCsv, Table5ShapeAndRoundTrip) {
  const EstimationResult res = fixtures::table5_result();
  const std::string path = temp_path("dcekit_res13.csv");
  write_result_csv(res, path);

  int fixed_rows = 0;
  int mean_rows = 0;
  int sd_rows = 0;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("fixed,", 0) == 0) ++fixed_rows;
      if (line.rfind("random_mean,", 0) == 0) ++mean_rows;
      if (line.rfind("random_sd,", 0) == 0) ++sd_rows;
    }
  }
  EXPECT_EQ(fixed_rows, 3);
  EXPECT_EQ(mean_rows, 5);
  EXPECT_EQ(sd_rows, 5);

  const EstimationResult back = load_result_csv(path);
  EXPECT_EQ(back.parameter_names, res.parameter_names);
  EXPECT_DOUBLE_EQ(back.estimates.at("price").value, res.estimates.at("price").value);
  EXPECT_DOUBLE_EQ(back.random_spreads.at("origin").value,
                   res.random_spreads.at("origin").value);
  EXPECT_EQ(back.n_observations, res.n_observations);
  EXPECT_TRUE(back.has_covariance());
  EXPECT_DOUBLE_EQ(back.covariance_between("price", "price"),
                   res.covariance_between("price", "price"));
}

TEST(ResultCsv, SecondWriteIsByteIdentical) {
  const EstimationResult res = fixtures::table5_result();
  const std::string p1 = temp_path("dcekit_w1.csv");
  const std::string p2 = temp_path("dcekit_w2.csv");
  write_result_csv(res, p1);
  write_result_csv(load_result_csv(p1), p2);
  EXPECT_EQ(slurp(p1), slurp(p2));
}

TEST(AttitudeCsv, RoundTripWithMissingCovariates) {
  AttitudeDataset data;
  AttitudeRow r1;
  r1.respondent_id = 1;
  r1.items = {5, 4, 4, 4, 2, 4, 1, 4, 4, 3, 3, 5, 4, 4, 4, 5};
  r1.age = 54;
  r1.female = 1;
  r1.tourist = 1;
  r1.education = 13;
  r1.income = std::numeric_limits<double>::quiet_NaN(); // refused
  r1.fix_income = 1;
  r1.campaign = 0;
  r1.town = "cuxhaven";
  data.respondents.push_back(r1);
  AttitudeRow r2 = r1;
  r2.respondent_id = 2;
  r2.items[0] = 3;
  r2.campaign = 1;
  r2.town = "ditzum";
  data.respondents.push_back(r2);

  const std::string path = temp_path("dcekit_att.csv");
  write_attitude_csv(data, path);
  const AttitudeDataset back = load_attitude_csv(path);
  ASSERT_EQ(back.respondents.size(), 2u);
  EXPECT_EQ(back.respondents[0].items, r1.items);
  EXPECT_TRUE(std::isnan(back.respondents[0].income));
  EXPECT_EQ(back.respondents[1].town, "ditzum");
}

TEST(AttitudeCsv, ScoreOutsideScaleRejected) {
  const std::string path = temp_path("dcekit_att_bad.csv");
  std::string row = "1";
  for (int q = 0; q < 16; ++q) row += q == 3 ? ",6" : ",4";
  row += ",54,1,1,13,3,1,0,busum\n";
  write_file(path,
             "resp_id,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11,q12,q13,q14,q15,q16,"
             "age,female,tourist,education,income,fix_income,campaign,town\n" +
                 row);
  EXPECT_THROW(load_attitude_csv(path), ValidationError);
}

TEST(KeyValueFiles, ModelSpecParsesPaperLayout) {
  const std::string path = temp_path("dcekit_spec.txt");
  write_file(path,
             "# estimation spec\n"
             "random = origin,processing,harvesting,certification,heritage\n"
             "fixed = price\n"
             "interactions = heritage*campaign\n"
             "draws = 100\n"
             "seed = 42\n");
  const ModelSpec spec = load_model_spec(path);
  EXPECT_EQ(spec.random_coefficients.size(), 5u);
  EXPECT_EQ(spec.fixed_coefficients, std::vector<std::string>{"price"});
  ASSERT_EQ(spec.interactions.size(), 1u);
  EXPECT_EQ(spec.interactions[0].first, "heritage");
  EXPECT_EQ(spec.interactions[0].second, "campaign");
  EXPECT_EQ(spec.n_draws, 100);
  EXPECT_EQ(spec.seed, 42u);
  EXPECT_EQ(spec.asc_alternatives, (std::vector<std::string>{"A", "B"}));
}

TEST(KeyValueFiles, AttributesFileMatchesBuiltinGrammar) {
  const std::string path = temp_path("dcekit_attrs.txt");
  write_file(path,
             "attribute = origin, dummy, imported, local\n"
             "attribute = price, continuous, 15, 23, 30, 35\n");
  const auto attrs = load_attributes(path);
  ASSERT_EQ(attrs.size(), 2u);
  EXPECT_EQ(attrs[0].coding, AttributeCoding::kDummy);
  EXPECT_EQ(attrs[1].continuous_values, (std::vector<double>{15, 23, 30, 35}));
}

TEST(Covariates, MergedAndQueried) {
  const std::string path = temp_path("dcekit_cov.csv");
  write_file(path, "resp_id,campaign,pro_heritage\n1,1,0\n2,,1\n");
  const CovariateTable table = load_covariates_csv(path);
  EXPECT_DOUBLE_EQ(table.at(1).at("campaign"), 1.0);
  EXPECT_TRUE(std::isnan(table.at(2).at("campaign")));
  const auto attrs = fixtures::paper_attrs();
  const ChoiceDataset data =
      fixtures::random_dataset(attrs, 2, 1, 5).with_covariates(table);
  EXPECT_DOUBLE_EQ(data.covariate(2, "pro_heritage"), 1.0);
}

TEST(EstimationResultType, InformationCriteriaRecomputable) {
  EstimationResult res = fixtures::table5_result();
  // k = 13 free parameters, ll = -1366.350: aic must match the published
  // 2758.700 exactly under aic = 2k - 2*ll.
  EXPECT_NEAR(res.aic, 2758.700, 1e-9);
  const double k = 13.0;
  EXPECT_NEAR(res.bic, k * std::log(1636.0) - 2.0 * res.log_likelihood, 1e-9);
}
