#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dcekit/attitudes.hpp"
#include "dcekit/io.hpp"
#include "dcekit/parallel.hpp"

#include "cli_util.hpp"
#include "commands.hpp"

namespace dcetool {

int run_cluster(const ClusterArgs& args) {
  const dce::AttitudeDataset data = dce::load_attitude_csv(args.attitudes);
  if (data.respondents.size() < 2)
    throw dce::ValidationError("need >= 2 respondents to cluster");
  const int threads = args.threads > 0 ? args.threads : dce::default_threads();

  const Eigen::MatrixXd raw = dce::attitude_item_matrix(data);
  const Eigen::MatrixXd features = dce::standardize_columns(raw);
  const dce::Dendrogram tree = dce::ward_cluster(features);

  std::filesystem::create_directories(args.out_dir);

  int k = 0;
  if (args.k == "auto") {
    const int k_max = std::min<int>(args.k_max, static_cast<int>(raw.rows()));
    const dce::GapResult gap =
        dce::gap_statistic(features, 1, k_max, args.gap_b, args.seed, threads);
    k = gap.chosen_k;

    const std::string gap_path = args.out_dir + "/gap.csv";
    std::ofstream out(gap_path);
    if (!out) throw dce::ParseError("cannot open for writing", gap_path, 0);
    out << "k,log_w,log_w_ref_mean,gap,s_k,chosen\n";
    for (std::size_t i = 0; i < gap.ks.size(); ++i) {
      out << gap.ks[i] << "," << dce::format_number(gap.log_w(static_cast<Eigen::Index>(i)))
          << "," << dce::format_number(gap.log_w_ref_mean(static_cast<Eigen::Index>(i)))
          << "," << dce::format_number(gap.gap(static_cast<Eigen::Index>(i))) << ","
          << dce::format_number(gap.s_k(static_cast<Eigen::Index>(i))) << ","
          << (gap.ks[i] == gap.chosen_k ? 1 : 0) << "\n";
    }
  } else {
    k = static_cast<int>(dce::parse_number(args.k));
    if (k < 1 || k > static_cast<int>(raw.rows()))
      throw dce::ValidationError("--k out of range");
  }

  const std::vector<int> labels = dce::cut_tree(tree, k);

  // The cluster with the highest raw grand-mean item score is pro-heritage.
  std::vector<double> cluster_sum(k, 0.0);
  std::vector<int> cluster_n(k, 0);
  for (std::size_t i = 0; i < data.respondents.size(); ++i) {
    cluster_sum[labels[i] - 1] += raw.row(static_cast<Eigen::Index>(i)).mean();
    cluster_n[labels[i] - 1] += 1;
  }
  int pro_cluster = 1;
  double best_mean = -1.0;
  for (int c = 0; c < k; ++c) {
    const double m = cluster_n[c] > 0 ? cluster_sum[c] / cluster_n[c] : 0.0;
    if (m > best_mean) {
      best_mean = m;
      pro_cluster = c + 1;
    }
  }

  const std::string clusters_path = args.out_dir + "/clusters.csv";
  {
    std::ofstream out(clusters_path);
    if (!out) throw dce::ParseError("cannot open for writing", clusters_path, 0);
    out << "resp_id,cluster,pro_heritage\n";
    for (std::size_t i = 0; i < data.respondents.size(); ++i)
      out << data.respondents[i].respondent_id << "," << labels[i] << ","
          << (labels[i] == pro_cluster ? 1 : 0) << "\n";
  }

  std::cout << "k=" << k << "\n"
            << "agglomerative_coefficient="
            << dce::format_number(dce::agglomerative_coefficient(tree)) << "\n";

  if (!args.logit_covariates.empty()) {
    // Pro-heritage membership on listwise-complete covariate rows.
    std::vector<int> keep;
    for (std::size_t i = 0; i < data.respondents.size(); ++i) {
      bool complete = true;
      for (const auto& name : args.logit_covariates)
        if (std::isnan(dce::attitude_covariate(data.respondents[i], name))) {
          complete = false;
          break;
        }
      if (complete) keep.push_back(static_cast<int>(i));
    }
    const int n = static_cast<int>(keep.size());
    const int p = static_cast<int>(args.logit_covariates.size());
    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = data.respondents[keep[i]];
      y(i) = labels[keep[i]] == pro_cluster ? 1.0 : 0.0;
      for (int j = 0; j < p; ++j)
        x(i, j) = dce::attitude_covariate(row, args.logit_covariates[j]);
      x(i, p) = 1.0;
    }
    std::vector<std::string> names = args.logit_covariates;
    names.push_back("constant");
    const dce::LogitResult logit = dce::fit_logistic(y, x, names);

    const std::string logit_path = args.out_dir + "/logit.csv";
    std::ofstream out(logit_path);
    if (!out) throw dce::ParseError("cannot open for writing", logit_path, 0);
    out << "term,estimate,std_error\n";
    for (std::size_t j = 0; j < logit.names.size(); ++j)
      out << logit.names[j] << ","
          << dce::format_number(logit.coef(static_cast<Eigen::Index>(j))) << ","
          << dce::format_number(logit.std_error(static_cast<Eigen::Index>(j))) << "\n";
    out << "observations," << logit.n_obs << ",\n";
    out << "log_likelihood," << dce::format_number(logit.log_likelihood) << ",\n";
    out << "aic," << dce::format_number(logit.aic) << ",\n";
    if (!logit.converged)
      std::cerr << "warning: logistic regression: " << logit.message << "\n";
  }

  return kExitOk;
}

} // namespace dcetool
