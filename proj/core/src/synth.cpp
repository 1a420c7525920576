#include "dcekit/synth.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "dcekit/stats.hpp"

namespace dce {

namespace {

double canonical_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gumbel(std::mt19937_64& rng) {
  return -std::log(-std::log(canonical_uniform(rng)));
}

} // namespace

ChoiceDataset simulate_choices(const DesignPlan& design,
                               const std::vector<AttributeSpec>& attrs,
                               const ModelSpec& spec, const Eigen::VectorXd& truth_theta,
                               int n_respondents, std::uint64_t seed,
                               const SynthConfig& config) {
  spec.validate();
  if (design.cards.empty()) throw ValidationError("simulate_choices: empty design");
  if (n_respondents < 1) throw ValidationError("simulate_choices: need >= 1 respondent");

  RowBuilder builder(attrs, spec);
  const int F = builder.n_fixed();
  const int R = builder.n_random();
  if (truth_theta.size() != F + 2 * R)
    throw ValidationError("simulate_choices: truth vector does not match the spec layout");
  const Eigen::VectorXd fixed = truth_theta.head(F);
  const Eigen::VectorXd means = truth_theta.segment(F, R);
  const Eigen::VectorXd spreads = truth_theta.segment(F + R, R).cwiseAbs();

  // Cards grouped by block, ascending card id inside each block.
  std::vector<std::vector<const ChoiceCard*>> blocks(design.n_blocks);
  for (const auto& card : design.cards) {
    if (card.block_id < 1 || card.block_id > design.n_blocks)
      throw ValidationError("simulate_choices: card block id out of range");
    blocks[card.block_id - 1].push_back(&card);
  }

  const std::vector<std::string> alt_ids = {"A", "B", "C"};
  const LevelVector baseline = baseline_levels(attrs);

  std::vector<ChoiceRow> rows;
  CovariateTable covariates;
  Eigen::RowVectorXd x_fixed(F);
  Eigen::RowVectorXd x_random(std::max(R, 1));

  for (int r = 0; r < n_respondents; ++r) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    const int resp_id = r + 1;

    std::map<std::string, double> covs;
    for (const auto& gen : config.covariates)
      covs[gen.name] = canonical_uniform(rng) < gen.prob ? 1.0 : 0.0;

    Eigen::VectorXd beta_r(R);
    for (int k = 0; k < R; ++k)
      beta_r(k) = means(k) + spreads(k) * stats::normal_quantile(canonical_uniform(rng));

    std::uniform_int_distribution<int> pick_block(0, design.n_blocks - 1);
    const auto& tasks = blocks[pick_block(rng)];
    if (tasks.empty()) throw ValidationError("simulate_choices: empty block");

    for (const ChoiceCard* card : tasks) {
      std::vector<const LevelVector*> alts = {&card->alternatives[0],
                                              &card->alternatives[1], &baseline};
      int best = 0;
      double best_u = -std::numeric_limits<double>::infinity();
      std::vector<std::vector<double>> raw(alts.size());
      for (std::size_t j = 0; j < alts.size(); ++j) {
        raw[j].resize(attrs.size());
        for (std::size_t a = 0; a < attrs.size(); ++a)
          raw[j][a] = attrs[a].level_value((*alts[j])[a]);
        builder.fill(alt_ids[j], raw[j], covs, x_fixed, x_random.head(R));
        const double u = x_fixed.head(F).dot(fixed) + x_random.head(R) * beta_r + gumbel(rng);
        if (u > best_u) {
          best_u = u;
          best = static_cast<int>(j);
        }
      }
      for (std::size_t j = 0; j < alts.size(); ++j) {
        ChoiceRow row;
        row.respondent_id = resp_id;
        row.task_id = card->card_id;
        row.alternative_id = alt_ids[j];
        row.chosen = static_cast<int>(j) == best ? 1 : 0;
        row.values = raw[j];
        rows.push_back(std::move(row));
      }
    }
    covariates[resp_id] = std::move(covs);
  }

  return ChoiceDataset(attrs, std::move(rows), std::move(covariates));
}

double quadrature_loglik(const Eigen::VectorXd& theta, const ChoiceDataset& data,
                         const ModelSpec& spec, int nodes) {
  spec.validate();
  PanelData panel(data, spec);
  const int F = static_cast<int>(panel.x_fixed().cols());
  const int R = static_cast<int>(panel.x_random().cols());
  const int J = panel.n_alternatives();
  if (R < 1 || R > 2)
    throw ValidationError("quadrature_loglik: supports 1 or 2 random coefficients");
  if (theta.size() != F + 2 * R) throw ValidationError("quadrature_loglik: theta size");

  const Eigen::VectorXd fixed = theta.head(F);
  const Eigen::VectorXd means = theta.segment(F, R);
  const Eigen::VectorXd spreads = theta.segment(F + R, R).cwiseAbs();

  const stats::GaussHermite gh = stats::gauss_hermite(nodes);
  const double sqrt2 = std::sqrt(2.0);
  const double log_sqrt_pi = 0.5 * std::log(M_PI);

  // Tensor grid of coefficient values and log-weights.
  const int C = R == 1 ? nodes : nodes * nodes;
  Eigen::MatrixXd beta_grid(R, C);
  Eigen::VectorXd log_weight(C);
  for (int c = 0; c < C; ++c) {
    const int i = R == 1 ? c : c / nodes;
    const int j = R == 1 ? 0 : c % nodes;
    beta_grid(0, c) = means(0) + spreads(0) * sqrt2 * gh.nodes(i);
    log_weight(c) = std::log(gh.weights(i)) - log_sqrt_pi;
    if (R == 2) {
      beta_grid(1, c) = means(1) + spreads(1) * sqrt2 * gh.nodes(j);
      log_weight(c) += std::log(gh.weights(j)) - log_sqrt_pi;
    }
  }

  const Eigen::VectorXd u_fixed =
      F > 0 ? Eigen::VectorXd(panel.x_fixed() * fixed)
            : Eigen::VectorXd::Zero(panel.n_rows());

  double total = 0.0;
  for (int r = 0; r < panel.n_respondents(); ++r) {
    Eigen::VectorXd acc = log_weight;
    for (int t = panel.resp_task_begin(r); t < panel.resp_task_begin(r + 1); ++t) {
      const int row0 = panel.task_row_begin(t);
      for (int c = 0; c < C; ++c) {
        double max_u = -std::numeric_limits<double>::infinity();
        Eigen::VectorXd u(J);
        for (int j = 0; j < J; ++j) {
          u(j) = u_fixed(row0 + j) + panel.x_random().row(row0 + j).dot(beta_grid.col(c));
          max_u = std::max(max_u, u(j));
        }
        acc(c) += (u(panel.task_chosen(t)) - max_u) -
                  std::log((u.array() - max_u).exp().sum());
      }
    }
    total += stats::log_sum_exp(acc);
  }
  return total;
}

} // namespace dce
