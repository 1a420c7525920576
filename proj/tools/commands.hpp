#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcetool {

struct DesignArgs {
  std::string attributes;
  int cards = 16;
  int blocks = 4;
  std::uint64_t seed = 1;
  int max_sweeps = 50;
  std::string prior; // named-values file over expanded columns
  std::string out;
};
int run_design(const DesignArgs& args);

struct SimulateArgs {
  std::string design;
  std::string attributes;
  std::string spec;
  std::string truth;
  int n_respondents = 409;
  std::uint64_t seed = 7;
  std::vector<std::string> covariate_gens; // name:prob
  std::string out;
  std::string covariates_out;
};
int run_simulate(const SimulateArgs& args);

struct FitArgs {
  std::string data;
  std::string attributes;
  std::string spec;
  std::vector<std::string> covariates;
  std::string model = "mixl";
  int draws = -1;          // -1: take from the spec file
  long long seed = -1;     // -1: take from the spec file
  int threads = 0;         // 0: all cores
  std::string out;
};
int run_fit(const FitArgs& args);

struct WtpArgs {
  std::string result;
  std::string data;
  std::string attributes;
  std::string spec;
  std::vector<std::string> covariates;
  std::string density; // attribute name; empty = no density export
  int grid_points = 512;
  int draws = -1;
  long long seed = -1;
  std::string out_dir;
};
int run_wtp(const WtpArgs& args);

struct ClusterArgs {
  std::string attitudes;
  std::string k = "auto";
  int k_max = 10;
  int gap_b = 50;
  std::uint64_t seed = 1;
  std::vector<std::string> logit_covariates;
  int threads = 0;
  std::string out_dir;
};
int run_cluster(const ClusterArgs& args);

struct ReportArgs {
  std::string data;
  std::string attributes;
  std::string spec;
  std::vector<std::string> covariates;
  std::vector<std::string> splits; // indicator covariate names
  std::string model = "mixl";
  int draws = -1;
  long long seed = -1;
  int threads = 0;
  int min_group = 30;
  std::string out;
};
int run_report(const ReportArgs& args);

} // namespace dcetool
