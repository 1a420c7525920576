#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace {

namespace fs = std::filesystem;

const char* kCli = DCEKIT_CLI_PATH;

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("dcekit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const int status = std::system((std::string(kCli) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const char* kSpecText =
    "random = origin,processing,harvesting,certification,heritage\n"
    "fixed = price\n"
    "draws = 25\n"
    "seed = 42\n";

const char* kTruthText =
    "asc_a = 1.3\nasc_b = 1.5\nprice = -0.09\n"
    "origin = 0.9\nprocessing = 0.6\nharvesting = 0.9\n"
    "certification = 1.2\nheritage = 0.45\n"
    "sd_origin = 1.0\nsd_processing = 0.8\nsd_harvesting = 1.0\n"
    "sd_certification = 1.1\nsd_heritage = 0.8\n";

// Shared pipeline artifacts built once.
struct Pipeline : ::testing::Environment {
  static Workdir& wd() {
    static Workdir w;
    return w;
  }
  void SetUp() override {
    write_file(wd().file("model.spec"), kSpecText);
    write_file(wd().file("truth.txt"), kTruthText);
    ASSERT_EQ(run("design --cards 16 --blocks 4 --seed 1 --out " + wd().file("design.csv")),
              0);
    ASSERT_EQ(run("simulate --design " + wd().file("design.csv") + " --spec " +
                  wd().file("model.spec") + " --truth " + wd().file("truth.txt") +
                  " --n 150 --seed 7 --out " + wd().file("choices.csv") +
                  " --covariates-out " + wd().file("covs.csv")),
              0);
  }
};

const ::testing::Environment* const pipeline_env =
    ::testing::AddGlobalTestEnvironment(new Pipeline);

} // namespace

TEST(Cli, DesignIndivisibleBlocksExitsTwo) {
  Workdir wd;
  EXPECT_EQ(run("design --cards 3 --blocks 2 --out " + wd.file("d.csv")), 2);
}

TEST(Cli, DesignDeterministicAcrossRuns) {
  Workdir wd;
  ASSERT_EQ(run("design --cards 16 --blocks 4 --seed 5 --out " + wd.file("d1.csv")), 0);
  ASSERT_EQ(run("design --cards 16 --blocks 4 --seed 5 --out " + wd.file("d2.csv")), 0);
  EXPECT_EQ(slurp(wd.file("d1.csv")), slurp(wd.file("d2.csv")));
  ASSERT_EQ(run("design --cards 16 --blocks 4 --seed 6 --out " + wd.file("d3.csv")), 0);
  EXPECT_NE(slurp(wd.file("d1.csv")), slurp(wd.file("d3.csv")));
}

TEST(Cli, FitSpecNamingAbsentColumnExitsTwo) {
  auto& wd = Pipeline::wd();
  write_file(wd.file("bad.spec"), "random = nonexistent\nfixed = price\n");
  EXPECT_EQ(run("fit --data " + wd.file("choices.csv") + " --spec " + wd.file("bad.spec") +
                " --model mnl --out " + wd.file("bad_out.csv")),
            2);
}

TEST(Cli, MissingDataFileExitsTwo) {
  auto& wd = Pipeline::wd();
  EXPECT_EQ(run("fit --data " + wd.file("nope.csv") + " --spec " + wd.file("model.spec") +
                " --model mnl --out " + wd.file("x.csv")),
            2);
}

TEST(Cli, FitMnlDeterministic) {
  auto& wd = Pipeline::wd();
  const std::string base = "fit --data " + wd.file("choices.csv") + " --spec " +
                           wd.file("model.spec") + " --model mnl --out ";
  ASSERT_EQ(run(base + wd.file("m1.csv")), 0);
  ASSERT_EQ(run(base + wd.file("m2.csv")), 0);
  EXPECT_EQ(slurp(wd.file("m1.csv")), slurp(wd.file("m2.csv")));
}

TEST(Cli, FitMixlDeterministicAcrossThreadCounts) {
  auto& wd = Pipeline::wd();
  const std::string base = "fit --data " + wd.file("choices.csv") + " --covariates " +
                           wd.file("covs.csv") + " --spec " + wd.file("model.spec") +
                           " --model mixl --draws 25 --seed 42 ";
  ASSERT_EQ(run(base + "--threads 1 --out " + wd.file("x1.csv")), 0);
  ASSERT_EQ(run(base + "--threads 1 --out " + wd.file("x1b.csv")), 0);
  ASSERT_EQ(run(base + "--threads 4 --out " + wd.file("x4.csv")), 0);
  EXPECT_EQ(slurp(wd.file("x1.csv")), slurp(wd.file("x1b.csv")));
  EXPECT_EQ(slurp(wd.file("x1.csv")), slurp(wd.file("x4.csv")));
}

TEST(Cli, WtpRequiresCovariance) {
  auto& wd = Pipeline::wd();
  // Strip covariance rows from a result file.
  const std::string full = slurp(wd.file("x1.csv"));
  ASSERT_FALSE(full.empty());
  std::string stripped;
  std::istringstream in(full);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("cov,", 0) != 0) stripped += line + "\n";
  write_file(wd.file("nocov.csv"), stripped);
  EXPECT_EQ(run("wtp --result " + wd.file("nocov.csv") + " --out-dir " + wd.file("w")), 2);
}

TEST(Cli, WtpReportAndDensityDeterministic) {
  auto& wd = Pipeline::wd();
  const std::string base = "wtp --result " + wd.file("x1.csv") + " --data " +
                           wd.file("choices.csv") + " --covariates " + wd.file("covs.csv") +
                           " --spec " + wd.file("model.spec") + " --density heritage ";
  ASSERT_EQ(run(base + "--out-dir " + wd.file("wtp1")), 0);
  ASSERT_EQ(run(base + "--out-dir " + wd.file("wtp2")), 0);
  EXPECT_EQ(slurp(wd.file("wtp1") + "/wtp.csv"), slurp(wd.file("wtp2") + "/wtp.csv"));
  EXPECT_EQ(slurp(wd.file("wtp1") + "/density_heritage.csv"),
            slurp(wd.file("wtp2") + "/density_heritage.csv"));
  EXPECT_NE(slurp(wd.file("wtp1") + "/density_heritage.csv").find("x,density"),
            std::string::npos);
}

namespace {

std::string attitude_fixture() {
  // Two latent groups: high scorers in campaign towns, low elsewhere.
  std::string csv =
      "resp_id,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11,q12,q13,q14,q15,q16,"
      "age,female,tourist,education,income,fix_income,campaign,town\n";
  int id = 1;
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < 30; ++i) {
      csv += std::to_string(id++);
      for (int q = 0; q < 16; ++q) {
        int score = g == 0 ? 4 + (i + q) % 2 : 1 + (i + q) % 2;
        csv += "," + std::to_string(score);
      }
      csv += "," + std::to_string(40 + (i * 7) % 30);            // age
      csv += "," + std::to_string(i % 2);                        // female
      csv += ",1";                                               // tourist
      csv += "," + std::to_string(10 + i % 8);                   // education
      csv += "," + std::to_string(1 + i % 6);                    // income
      csv += "," + std::to_string((i + 1) % 2);                  // fix_income
      csv += g == 0 ? ",1,ditzum\n" : ",0,cuxhaven\n";           // campaign, town
    }
  }
  return csv;
}

} // namespace

TEST(Cli, ClusterTwoGroupsAndLogit) {
  auto& wd = Pipeline::wd();
  write_file(wd.file("attitudes.csv"), attitude_fixture());
  const std::string base = "cluster --attitudes " + wd.file("attitudes.csv") +
                           " --k auto --k-max 6 --gap-B 15 --seed 3 "
                           "--logit age,education,campaign ";
  ASSERT_EQ(run(base + "--out-dir " + wd.file("c1")), 0);
  ASSERT_EQ(run(base + "--out-dir " + wd.file("c2")), 0);
  EXPECT_EQ(slurp(wd.file("c1") + "/clusters.csv"), slurp(wd.file("c2") + "/clusters.csv"));
  EXPECT_EQ(slurp(wd.file("c1") + "/gap.csv"), slurp(wd.file("c2") + "/gap.csv"));
  EXPECT_EQ(slurp(wd.file("c1") + "/logit.csv"), slurp(wd.file("c2") + "/logit.csv"));

  // Logit report: 3 covariates + constant + 3 stat rows + header.
  const std::string logit = slurp(wd.file("c1") + "/logit.csv");
  EXPECT_NE(logit.find("campaign,"), std::string::npos);
  EXPECT_NE(logit.find("constant,"), std::string::npos);
  EXPECT_NE(logit.find("aic,"), std::string::npos);
}

TEST(Cli, ClusterFixedKTwoLabels) {
  auto& wd = Pipeline::wd();
  write_file(wd.file("attitudes2.csv"), attitude_fixture());
  ASSERT_EQ(run("cluster --attitudes " + wd.file("attitudes2.csv") +
                " --k 2 --out-dir " + wd.file("ck")),
            0);
  const std::string clusters = slurp(wd.file("ck") + "/clusters.csv");
  EXPECT_NE(clusters.find(",1,"), std::string::npos);
  EXPECT_NE(clusters.find(",2,"), std::string::npos);
}

TEST(Cli, ClusterMalformedCsvExitsTwo) {
  Workdir wd;
  write_file(wd.file("broken.csv"), "resp_id,q1\n1,3\n");
  EXPECT_EQ(run("cluster --attitudes " + wd.file("broken.csv") + " --k 2 --out-dir " +
                wd.file("cb")),
            2);
}

TEST(Cli, ReportSubgroupsAndDeterminism) {
  auto& wd = Pipeline::wd();
  const std::string base = "report --data " + wd.file("choices.csv") + " --covariates " +
                           wd.file("covs.csv") + " --spec " + wd.file("model.spec") +
                           " --splits campaign --model mixl --draws 25 --seed 42 "
                           "--min-group 30 ";
  ASSERT_EQ(run(base + "--out " + wd.file("r1.txt")), 0);
  ASSERT_EQ(run(base + "--out " + wd.file("r2.txt")), 0);
  EXPECT_EQ(slurp(wd.file("r1.txt")), slurp(wd.file("r2.txt")));
  const std::string report = slurp(wd.file("r1.txt"));
  EXPECT_NE(report.find("subgroup wtp means"), std::string::npos);
  EXPECT_NE(report.find("campaign=1"), std::string::npos);
  EXPECT_NE(report.find("campaign=0"), std::string::npos);
}

TEST(Cli, ReportConstantIndicatorWarnsAndSkips) {
  auto& wd = Pipeline::wd();
  // Constant indicator: the =0 group is empty and must be skipped.
  std::string covs = "resp_id,always\n";
  for (int id = 1; id <= 150; ++id) covs += std::to_string(id) + ",1\n";
  write_file(wd.file("const_cov.csv"), covs);
  ASSERT_EQ(run("report --data " + wd.file("choices.csv") + " --covariates " +
                wd.file("const_cov.csv") + " --spec " + wd.file("model.spec") +
                " --splits always --model mnl --min-group 30 --out " + wd.file("rc.txt")),
            0);
  const std::string report = slurp(wd.file("rc.txt"));
  EXPECT_NE(report.find("always=1"), std::string::npos);
  EXPECT_EQ(report.find("always=0      "), std::string::npos);
  EXPECT_NE(report.find("skipped"), std::string::npos);
}

TEST(Cli, ConfigFileOverridesDefaults) {
  auto& wd = Pipeline::wd();
  write_file(wd.file("design.cfg"), "cards=8\nblocks=2\nseed=9\n");
  ASSERT_EQ(run("design --config " + wd.file("design.cfg") + " --out " + wd.file("dc.csv")),
            0);
  // 8 cards -> 24 rows + header
  const std::string design = slurp(wd.file("dc.csv"));
  int lines = 0;
  for (char c : design)
    if (c == '\n') ++lines;
  EXPECT_EQ(lines, 25);
}
