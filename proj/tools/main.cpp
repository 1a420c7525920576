#include <CLI11.hpp>

#include "cli_util.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dcekit: choice-experiment design, estimation, WTP and segmentation"};
  app.require_subcommand(1);

  dcetool::DesignArgs design;
  auto* cmd_design = app.add_subcommand("design", "search a D-efficient blocked design");
  cmd_design->add_option("--attributes", design.attributes, "attribute grammar file");
  cmd_design->add_option("--cards", design.cards, "number of choice cards");
  cmd_design->add_option("--blocks", design.blocks, "number of blocks");
  cmd_design->add_option("--seed", design.seed, "search seed");
  cmd_design->add_option("--max-sweeps", design.max_sweeps, "exchange sweep limit");
  cmd_design->add_option("--prior", design.prior, "named prior coefficients file");
  cmd_design->add_option("--out", design.out, "design CSV path")->required();
  cmd_design->set_config("--config");

  dcetool::SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "generate synthetic choices");
  cmd_simulate->add_option("--design", simulate.design, "design CSV")->required();
  cmd_simulate->add_option("--attributes", simulate.attributes, "attribute grammar file");
  cmd_simulate->add_option("--spec", simulate.spec, "model spec file")->required();
  cmd_simulate->add_option("--truth", simulate.truth, "true coefficients file")->required();
  cmd_simulate->add_option("--n", simulate.n_respondents, "respondents");
  cmd_simulate->add_option("--seed", simulate.seed, "generator seed");
  cmd_simulate->add_option("--covariate", simulate.covariate_gens,
                           "covariate generator name:prob (repeatable)");
  cmd_simulate->add_option("--out", simulate.out, "choice CSV path")->required();
  cmd_simulate->add_option("--covariates-out", simulate.covariates_out,
                           "covariate CSV path");
  cmd_simulate->set_config("--config");

  dcetool::FitArgs fit;
  auto* cmd_fit = app.add_subcommand("fit", "estimate a choice model");
  cmd_fit->add_option("--data", fit.data, "choice CSV")->required();
  cmd_fit->add_option("--attributes", fit.attributes, "attribute grammar file");
  cmd_fit->add_option("--spec", fit.spec, "model spec file")->required();
  cmd_fit->add_option("--covariates", fit.covariates, "covariate CSV (repeatable)");
  cmd_fit->add_option("--model", fit.model, "mnl or mixl")->default_str("mixl");
  cmd_fit->add_option("--draws", fit.draws, "simulation draws (default: spec file)");
  cmd_fit->add_option("--seed", fit.seed, "draw seed (default: spec file)");
  cmd_fit->add_option("--threads", fit.threads, "worker threads (default: cores)");
  cmd_fit->add_option("--out", fit.out, "result CSV path")->required();
  cmd_fit->set_config("--config");

  dcetool::WtpArgs wtp;
  auto* cmd_wtp = app.add_subcommand("wtp", "willingness-to-pay report");
  cmd_wtp->add_option("--result", wtp.result, "result CSV from fit")->required();
  cmd_wtp->add_option("--data", wtp.data, "choice CSV (for the density export)");
  cmd_wtp->add_option("--attributes", wtp.attributes, "attribute grammar file");
  cmd_wtp->add_option("--spec", wtp.spec, "model spec file");
  cmd_wtp->add_option("--covariates", wtp.covariates, "covariate CSV (repeatable)");
  cmd_wtp->add_option("--density", wtp.density, "attribute for the kernel density export");
  cmd_wtp->add_option("--grid-points", wtp.grid_points, "density grid size");
  cmd_wtp->add_option("--draws", wtp.draws, "simulation draws (default: spec file)");
  cmd_wtp->add_option("--seed", wtp.seed, "draw seed (default: spec file)");
  cmd_wtp->add_option("--out-dir", wtp.out_dir, "output directory")->required();
  cmd_wtp->set_config("--config");

  dcetool::ClusterArgs cluster;
  auto* cmd_cluster = app.add_subcommand("cluster", "attitude segmentation");
  cmd_cluster->add_option("--attitudes", cluster.attitudes, "attitude CSV")->required();
  cmd_cluster->add_option("--k", cluster.k, "cluster count or 'auto'");
  cmd_cluster->add_option("--k-max", cluster.k_max, "largest k for the gap statistic");
  cmd_cluster->add_option("--gap-B", cluster.gap_b, "gap reference sets");
  cmd_cluster->add_option("--seed", cluster.seed, "gap statistic seed");
  cmd_cluster->add_option("--logit", cluster.logit_covariates,
                          "logistic covariates, comma separated")
      ->delimiter(',');
  cmd_cluster->add_option("--threads", cluster.threads, "worker threads");
  cmd_cluster->add_option("--out-dir", cluster.out_dir, "output directory")->required();
  cmd_cluster->set_config("--config");

  dcetool::ReportArgs report;
  auto* cmd_report = app.add_subcommand("report", "fit + WTP + subgroup summary");
  cmd_report->add_option("--data", report.data, "choice CSV")->required();
  cmd_report->add_option("--attributes", report.attributes, "attribute grammar file");
  cmd_report->add_option("--spec", report.spec, "model spec file")->required();
  cmd_report->add_option("--covariates", report.covariates, "covariate CSV (repeatable)");
  cmd_report->add_option("--splits", report.splits,
                         "indicator covariates for subgroup refits, comma separated")
      ->delimiter(',');
  cmd_report->add_option("--model", report.model, "mnl or mixl");
  cmd_report->add_option("--draws", report.draws, "simulation draws");
  cmd_report->add_option("--seed", report.seed, "draw seed");
  cmd_report->add_option("--threads", report.threads, "worker threads");
  cmd_report->add_option("--min-group", report.min_group, "smallest subgroup to refit");
  cmd_report->add_option("--out", report.out, "report text path")->required();
  cmd_report->set_config("--config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dcetool::kExitInput;
  }

  if (*cmd_design) return dcetool::guarded([&] { return dcetool::run_design(design); });
  if (*cmd_simulate)
    return dcetool::guarded([&] { return dcetool::run_simulate(simulate); });
  if (*cmd_fit) return dcetool::guarded([&] { return dcetool::run_fit(fit); });
  if (*cmd_wtp) return dcetool::guarded([&] { return dcetool::run_wtp(wtp); });
  if (*cmd_cluster) return dcetool::guarded([&] { return dcetool::run_cluster(cluster); });
  if (*cmd_report) return dcetool::guarded([&] { return dcetool::run_report(report); });
  return dcetool::kExitInput;
}
