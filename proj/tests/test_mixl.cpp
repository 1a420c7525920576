#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dcekit/mixl.hpp"
#include "dcekit/mnl.hpp"
#include "dcekit/synth.hpp"
#include "helpers.hpp"

using namespace dce;

namespace {

// One-random-coefficient fixture: J=2 alternatives, no ASC, binary x.
struct OneDim {
  std::vector<AttributeSpec> attrs;
  ModelSpec spec;
  ChoiceDataset data;
  PanelData panel;

  static OneDim make(int n_resp, int n_tasks, std::uint64_t seed) {
    std::vector<AttributeSpec> attrs = {fixtures::binary_attr("x")};
    ModelSpec spec;
    spec.asc_alternatives = {};
    spec.random_coefficients = {"x"};
    std::mt19937_64 rng(seed);
    std::vector<ChoiceRow> rows;
    for (int r = 1; r <= n_resp; ++r)
      for (int t = 1; t <= n_tasks; ++t) {
        const int chosen = static_cast<int>(rng() % 2);
        rows.push_back({r, t, "A", chosen == 0 ? 1 : 0, {1.0}});
        rows.push_back({r, t, "B", chosen == 1 ? 1 : 0, {0.0}});
      }
    ChoiceDataset data(attrs, rows);
    PanelData panel(data, spec);
    return OneDim{std::move(attrs), std::move(spec), std::move(data), std::move(panel)};
  }
};

} // namespace

TEST(SimulatedLoglik, ZeroSpreadsEqualsExactMnl) {
  const auto attrs = fixtures::paper_attrs();
  const ModelSpec spec = fixtures::paper_spec();
  const ChoiceDataset data = fixtures::random_dataset(attrs, 40, 4, 3);
  const PanelData panel(data, spec);

  Eigen::VectorXd theta(13);
  theta << 0.5, 0.7, -0.08, 0.9, 0.6, 0.9, 1.2, 0.45, 0, 0, 0, 0, 0;
  const DrawMatrix draws = make_draws(40, 60, 5);
  const double sim = simulated_loglik(theta, panel, draws);
  const double exact = mnl_loglik(theta.head(8), panel);
  EXPECT_NEAR(sim, exact, 1e-10 * std::abs(exact));
}

TEST(SimulatedLoglik, MatchesQuadratureOnOneDimFixture) {
  const OneDim fx = OneDim::make(1, 2, 5);
  Eigen::VectorXd theta(2);
  theta << 0.8, 1.1;
  const double quad = quadrature_loglik(theta, fx.data, fx.spec, 64);
  const DrawMatrix draws = make_draws(1, 1000, 1);
  const double sim = simulated_loglik(theta, fx.panel, draws);
  EXPECT_LT(std::abs(sim - quad) / std::abs(quad), 1e-2);
}

TEST(SimulatedLoglik, DuplicatedDrawBlockIsIdempotent) {
  const OneDim fx = OneDim::make(6, 3, 8);
  const DrawMatrix base = make_draws(6, 50, 1);
  Eigen::MatrixXd doubled(1, 6 * 100);
  for (int r = 0; r < 6; ++r) {
    doubled.block(0, r * 100, 1, 50) = base.respondent_block(r);
    doubled.block(0, r * 100 + 50, 1, 50) = base.respondent_block(r);
  }
  const DrawMatrix twice = DrawMatrix::from_raw(doubled, 6, 100);
  Eigen::VectorXd theta(2);
  theta << 0.4, 0.9;
  const double a = simulated_loglik(theta, fx.panel, base);
  const double b = simulated_loglik(theta, fx.panel, twice);
  EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
}

TEST(SimulatedLoglik, SpreadSignInvarianceIsExact) {
  const auto attrs = fixtures::paper_attrs();
  const ModelSpec spec = fixtures::paper_spec();
  const ChoiceDataset data = fixtures::random_dataset(attrs, 25, 4, 12);
  const PanelData panel(data, spec);
  const DrawMatrix draws = make_draws(25, 40, 5);

  Eigen::VectorXd theta = fixtures::paper_truth();
  const double base = simulated_loglik(theta, panel, draws);
  for (int i = 8; i < 13; ++i) {
    Eigen::VectorXd flipped = theta;
    flipped(i) = -flipped(i);
    EXPECT_EQ(simulated_loglik(flipped, panel, draws), base) << "spread " << i;
  }
}

TEST(SimulatedLoglik, ThreadCountInvariantBitwise) {
  const auto attrs = fixtures::paper_attrs();
  const ModelSpec spec = fixtures::paper_spec();
  const ChoiceDataset data = fixtures::random_dataset(attrs, 31, 4, 21);
  const PanelData panel(data, spec);
  const DrawMatrix draws = make_draws(31, 30, 5);
  const Eigen::VectorXd theta = fixtures::paper_truth();
  const double t1 = simulated_loglik(theta, panel, draws, 1);
  for (int threads : {2, 3, 8}) {
    EXPECT_EQ(simulated_loglik(theta, panel, draws, threads), t1);
  }
}

TEST(SimulatedLoglik, MonteCarloErrorShrinksWithDraws) {
  // Median absolute error vs quadrature over 20 pseudo seeds must fall
  // as draws grow 25 -> 100 -> 400.
  const OneDim fx = OneDim::make(30, 4, 77);
  Eigen::VectorXd theta(2);
  theta << 0.6, 1.0;
  const double quad = quadrature_loglik(theta, fx.data, fx.spec, 64);

  std::vector<double> median_err;
  for (int n_draws : {25, 100, 400}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      DrawConfig config;
      config.tag = DrawGenerator::kPseudo;
      config.seed = seed;
      const DrawMatrix draws = make_draws(30, n_draws, 1, config);
      errs.push_back(std::abs(simulated_loglik(theta, fx.panel, draws) - quad));
    }
    std::sort(errs.begin(), errs.end());
    median_err.push_back(0.5 * (errs[9] + errs[10]));
  }
  EXPECT_GT(median_err[0], median_err[1]);
  EXPECT_GT(median_err[1], median_err[2]);
}

TEST(FdGradient, HessianColumnsAgreeAcrossSymmetricPairs) {
  // Smooth analytic objective: the finite-difference Hessian must be
  // symmetric to high accuracy.
  const auto fn = [](const Eigen::VectorXd& v) {
    return -(v(0) * v(0) + 0.5 * v(0) * v(1) + 0.8 * v(1) * v(1)) + std::sin(v(0));
  };
  Eigen::VectorXd at(2);
  at << 0.3, -0.4;
  const Eigen::MatrixXd h = fd_hessian(fn, at, 1e-6, 1e-4);
  EXPECT_NEAR(h(0, 1), h(1, 0), 1e-8);
  EXPECT_NEAR(h(0, 1), -0.5, 1e-6);
}

TEST(FitMixl, ZeroSpreadOptimumMatchesMnlMeans) {
  // With spreads pinned at zero the simulated likelihood is the exact MNL
  // one, so the MNL optimum must be stationary in the mean block.
  const auto attrs = fixtures::paper_attrs();
  const ModelSpec spec = fixtures::paper_spec();
  const ChoiceDataset data = fixtures::random_dataset(attrs, 60, 4, 31);
  const PanelData panel(data, spec);
  const MnlFit mnl = fit_mnl_panel(panel);

  Eigen::VectorXd theta(13);
  theta.head(8) = mnl.theta;
  theta.tail(5).setZero();
  const DrawMatrix draws = make_draws(60, 50, 5);
  const auto objective = [&](const Eigen::VectorXd& t) {
    return simulated_loglik(t, panel, draws);
  };
  const Eigen::VectorXd grad = fd_gradient(objective, theta, 1e-5);
  EXPECT_LT(grad.head(8).lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(FitMixl, RecoversInteractionShift) {
  // Synthetic heritage*campaign effect: the estimate must be positive and
  // significant.
  const DesignPlan plan = fixtures::paper_plan(1);
  const auto attrs = fixtures::paper_attrs();
  ModelSpec spec = fixtures::paper_spec();
  spec.interactions = {{"heritage", "campaign"}};

  const ParameterLayout layout = mixl_layout(attrs, spec);
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(layout.size());
  truth(layout.index_of("asc_a")) = 1.3;
  truth(layout.index_of("asc_b")) = 1.5;
  truth(layout.index_of("price")) = -0.09;
  truth(layout.index_of("heritage*campaign")) = 0.6;
  truth(layout.index_of("origin")) = 0.9;
  truth(layout.index_of("processing")) = 0.6;
  truth(layout.index_of("harvesting")) = 0.9;
  truth(layout.index_of("certification")) = 1.2;
  truth(layout.index_of("heritage")) = 0.25;
  truth.segment(layout.n_fixed() + 5, 5) << 1.0, 0.8, 1.0, 1.1, 0.8;

  const ChoiceDataset data = simulate_choices(plan, attrs, spec, truth, 1200, 17);
  MixlConfig config;
  config.n_draws = 50;
  const EstimationResult res = fit_mixl(data, spec, config);
  const auto& est = res.coefficient("heritage*campaign");
  EXPECT_GT(est.value, 0.0);
  EXPECT_GT(est.value / est.std_error, 1.96);
  EXPECT_LT(std::abs(est.value - 0.6), 3.0 * est.std_error);
}

TEST(FitMixl, BothInteractionsEstimableTogether) {
  // Table-5 column (4) shape: campaign and pro-heritage interactions in one
  // spec, on data carrying both effects.
  const DesignPlan plan = fixtures::paper_plan(1);
  const auto attrs = fixtures::paper_attrs();
  ModelSpec spec = fixtures::paper_spec();
  spec.interactions = {{"heritage", "campaign"}, {"heritage", "pro_heritage"}};

  const ParameterLayout layout = mixl_layout(attrs, spec);
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(layout.size());
  truth(layout.index_of("asc_a")) = 1.2;
  truth(layout.index_of("asc_b")) = 1.4;
  truth(layout.index_of("price")) = -0.09;
  truth(layout.index_of("heritage*campaign")) = 0.5;
  truth(layout.index_of("heritage*pro_heritage")) = 0.4;
  truth(layout.index_of("origin")) = 0.9;
  truth(layout.index_of("processing")) = 0.6;
  truth(layout.index_of("harvesting")) = 0.9;
  truth(layout.index_of("certification")) = 1.2;
  truth(layout.index_of("heritage")) = 0.1;
  truth.segment(layout.n_fixed() + 5, 5) << 1.0, 0.8, 1.0, 1.1, 0.8;

  SynthConfig synth;
  synth.covariates = {{"campaign", 0.4}, {"pro_heritage", 0.55}};
  const ChoiceDataset data = simulate_choices(plan, attrs, spec, truth, 1500, 23, synth);
  MixlConfig config;
  config.n_draws = 50;
  const EstimationResult res = fit_mixl(data, spec, config);
  EXPECT_TRUE(res.converged);
  EXPECT_LT(std::abs(res.coefficient("heritage*campaign").value - 0.5),
            3.0 * res.coefficient("heritage*campaign").std_error);
  EXPECT_LT(std::abs(res.coefficient("heritage*pro_heritage").value - 0.4),
            3.0 * res.coefficient("heritage*pro_heritage").std_error);
}

TEST(FitMixl, ReportsAbsoluteSpreads) {
  const OneDim fx = OneDim::make(80, 4, 101);
  MixlConfig config;
  config.n_draws = 40;
  ModelSpec spec = fx.spec;
  const EstimationResult res = fit_mixl(fx.data, spec, config);
  EXPECT_GE(res.random_spreads.at("x").value, 0.0);
}
