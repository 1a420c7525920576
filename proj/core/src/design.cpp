#include "dcekit/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dcekit/model.hpp"

namespace dce {

std::vector<LevelVector> full_factorial(const std::vector<AttributeSpec>& attrs) {
  if (attrs.empty()) throw ValidationError("full_factorial: need >= 1 attribute");
  long long count = 1;
  for (const auto& a : attrs) {
    a.validate();
    count *= a.n_levels();
    if (count > 10'000'000)
      throw ValidationError("full_factorial: candidate count exceeds 10^7");
  }
  std::vector<LevelVector> out;
  out.reserve(static_cast<std::size_t>(count));
  LevelVector current(attrs.size(), 0);
  while (true) {
    out.push_back(current);
    int pos = static_cast<int>(attrs.size()) - 1;
    while (pos >= 0) {
      if (++current[pos] < attrs[pos].n_levels()) break;
      current[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

std::map<std::string, int> default_preference_direction(
    const std::vector<AttributeSpec>& attrs) {
  std::map<std::string, int> dir;
  for (const auto& a : attrs)
    dir[a.name] = a.coding == AttributeCoding::kContinuous ? -1 : +1;
  return dir;
}

namespace {

std::vector<LevelVector> card_with_baseline(const ChoiceCard& card,
                                            const std::vector<AttributeSpec>& attrs) {
  std::vector<LevelVector> alts = card.alternatives;
  alts.push_back(baseline_levels(attrs));
  return alts;
}

// a dominates b: weakly better everywhere, strictly better somewhere.
bool dominates(const LevelVector& a, const LevelVector& b,
               const std::vector<AttributeSpec>& attrs, const std::vector<int>& sign) {
  bool strict = false;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const double diff = sign[i] * (attrs[i].level_value(a[i]) - attrs[i].level_value(b[i]));
    if (diff < 0.0) return false;
    if (diff > 0.0) strict = true;
  }
  return strict;
}

} // namespace

bool is_dominated(const ChoiceCard& card, const std::vector<AttributeSpec>& attrs,
                  const std::map<std::string, int>& direction) {
  std::vector<int> sign(attrs.size());
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    auto it = direction.find(attrs[i].name);
    if (it == direction.end())
      throw ValidationError("preference direction missing for '" + attrs[i].name + "'");
    sign[i] = it->second;
  }
  const auto alts = card_with_baseline(card, attrs);
  for (std::size_t i = 0; i < alts.size(); ++i)
    for (std::size_t j = 0; j < alts.size(); ++j)
      if (i != j && dominates(alts[i], alts[j], attrs, sign)) return true;
  return false;
}

bool is_degenerate(const ChoiceCard& card, const std::vector<AttributeSpec>& attrs) {
  const auto alts = card_with_baseline(card, attrs);
  for (std::size_t i = 0; i < alts.size(); ++i)
    for (std::size_t j = i + 1; j < alts.size(); ++j)
      if (alts[i] == alts[j]) return true;
  return false;
}

namespace {

struct DErrorScorer {
  const std::vector<AttributeSpec>& attrs;
  std::vector<AttributeColumn> columns;
  Eigen::VectorXd prior;
  int k = 0;

  DErrorScorer(const std::vector<AttributeSpec>& a, const Eigen::VectorXd& p) : attrs(a) {
    columns = expand_attribute_columns(attrs);
    k = static_cast<int>(columns.size());
    if (p.size() == 0) {
      prior = Eigen::VectorXd::Zero(k);
    } else if (p.size() == k) {
      prior = p;
    } else {
      throw ValidationError("prior length must match the expanded column count (" +
                            std::to_string(k) + ")");
    }
  }

  Eigen::MatrixXd card_rows(const ChoiceCard& card) const {
    const auto alts = card_with_baseline(card, attrs);
    Eigen::MatrixXd x(alts.size(), k);
    for (std::size_t j = 0; j < alts.size(); ++j)
      for (int c = 0; c < k; ++c) {
        const auto& col = columns[c];
        x(static_cast<Eigen::Index>(j), c) =
            column_value(col, attrs[col.attribute], attrs[col.attribute].level_value(alts[j][col.attribute]));
      }
    return x;
  }

  // Logit information contribution of one choice set.
  Eigen::MatrixXd card_information(const ChoiceCard& card) const {
    const Eigen::MatrixXd x = card_rows(card);
    Eigen::VectorXd u = x * prior;
    u.array() -= u.maxCoeff();
    Eigen::VectorXd p = u.array().exp();
    p /= p.sum();
    const Eigen::VectorXd xbar = x.transpose() * p;
    return x.transpose() * p.asDiagonal() * x - xbar * xbar.transpose();
  }

  double d_error_of(const Eigen::MatrixXd& information) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(information);
    const auto& ev = es.eigenvalues();
    const double max_ev = ev.maxCoeff();
    if (!(max_ev > 0.0)) return std::numeric_limits<double>::infinity();
    double log_det = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) <= 1e-12 * max_ev) return std::numeric_limits<double>::infinity();
      log_det += std::log(ev(i));
    }
    return std::exp(-log_det / k);
  }
};

} // namespace

double score_d_error(const std::vector<ChoiceCard>& cards,
                     const std::vector<AttributeSpec>& attrs, const Eigen::VectorXd& prior) {
  if (cards.empty()) throw ValidationError("score_d_error: empty design");
  DErrorScorer scorer(attrs, prior);
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(scorer.k, scorer.k);
  for (const auto& card : cards) info += scorer.card_information(card);
  return scorer.d_error_of(info);
}

Eigen::MatrixXd attribute_correlation(const std::vector<ChoiceCard>& cards,
                                      const std::vector<AttributeSpec>& attrs) {
  DErrorScorer scorer(attrs, Eigen::VectorXd());
  const int k = scorer.k;
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::Index rows = 0;
  for (const auto& card : cards) {
    blocks.push_back(scorer.card_rows(card));
    rows += blocks.back().rows();
  }
  Eigen::MatrixXd x(rows, k);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    x.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::VectorXd sd = (x.array().square().colwise().sum() / x.rows()).sqrt();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      if (sd(i) <= 0.0 || sd(j) <= 0.0) {
        corr(i, j) = 0.0;
      } else {
        corr(i, j) = x.col(i).dot(x.col(j)) / (x.rows() * sd(i) * sd(j));
      }
    }
  return corr;
}

namespace {

ChoiceCard make_card(const LevelVector& a, const LevelVector& b) {
  ChoiceCard card;
  card.alternatives = {a, b};
  return card;
}

bool card_ok(const ChoiceCard& card, const std::vector<AttributeSpec>& attrs,
             const std::map<std::string, int>& direction) {
  return !is_degenerate(card, attrs) && !is_dominated(card, attrs, direction);
}

} // namespace

DesignPlan optimize_design(const std::vector<LevelVector>& candidates,
                           const std::vector<AttributeSpec>& attrs,
                           const DesignConfig& config) {
  if (candidates.empty()) throw ValidationError("optimize_design: empty candidate set");
  if (config.n_cards < 1) throw ValidationError("optimize_design: n_cards must be >= 1");
  if (config.n_blocks < 1 || config.n_cards % config.n_blocks != 0)
    throw ValidationError("optimize_design: n_cards must divide evenly into n_blocks");

  const auto direction = default_preference_direction(attrs);
  DErrorScorer scorer(attrs, config.prior);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);

  // Random non-dominated start.
  std::vector<ChoiceCard> cards;
  for (int c = 0; c < config.n_cards; ++c) {
    ChoiceCard card;
    bool found = false;
    for (int attempt = 0; attempt < 20000; ++attempt) {
      card = make_card(candidates[pick(rng)], candidates[pick(rng)]);
      if (card_ok(card, attrs, direction)) {
        found = true;
        break;
      }
    }
    if (!found)
      throw ValidationError("optimize_design: could not construct a non-dominated card "
                            "from the candidate set");
    cards.push_back(card);
  }

  std::vector<Eigen::MatrixXd> card_info;
  card_info.reserve(cards.size());
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(scorer.k, scorer.k);
  for (const auto& card : cards) {
    card_info.push_back(scorer.card_information(card));
    total += card_info.back();
  }
  double current = scorer.d_error_of(total);

  // Coordinate exchange: best strictly-improving candidate per slot.
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    bool improved = false;
    for (int c = 0; c < config.n_cards; ++c) {
      for (int slot = 0; slot < 2; ++slot) {
        double best = current;
        int best_candidate = -1;
        Eigen::MatrixXd best_info;
        for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
          ChoiceCard trial = cards[c];
          trial.alternatives[slot] = candidates[idx];
          if (!card_ok(trial, attrs, direction)) continue;
          const Eigen::MatrixXd info = scorer.card_information(trial);
          const double d = scorer.d_error_of(total - card_info[c] + info);
          if (d < best) {
            best = d;
            best_candidate = static_cast<int>(idx);
            best_info = info;
          }
        }
        if (best_candidate >= 0) {
          cards[c].alternatives[slot] = candidates[best_candidate];
          total += best_info - card_info[c];
          card_info[c] = best_info;
          current = best;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  DesignPlan plan;
  plan.n_blocks = config.n_blocks;
  plan.prior = scorer.prior;
  const std::vector<int> blocks = assign_blocks(cards, attrs, config.n_blocks, config.seed);
  for (int c = 0; c < config.n_cards; ++c) {
    cards[c].card_id = c + 1;
    cards[c].block_id = blocks[c];
  }
  plan.cards = std::move(cards);
  plan.d_error = score_d_error(plan.cards, attrs, plan.prior);
  plan.attribute_correlation = attribute_correlation(plan.cards, attrs);
  return plan;
}

namespace {

// Per-block count of each (attribute, level) over the explicit alternatives.
struct BlockBalance {
  int n_levels_total = 0;
  std::vector<int> level_offset;

  explicit BlockBalance(const std::vector<AttributeSpec>& attrs) {
    level_offset.resize(attrs.size());
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      level_offset[a] = n_levels_total;
      n_levels_total += attrs[a].n_levels();
    }
  }

  Eigen::VectorXd card_counts(const ChoiceCard& card) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_levels_total);
    for (const auto& alt : card.alternatives)
      for (std::size_t a = 0; a < alt.size(); ++a) v(level_offset[a] + alt[a]) += 1.0;
    return v;
  }
};

double balance_objective(const std::vector<Eigen::VectorXd>& counts,
                         const std::vector<int>& block_of, int n_blocks,
                         const Eigen::VectorXd& target) {
  std::vector<Eigen::VectorXd> sums(n_blocks, Eigen::VectorXd::Zero(target.size()));
  for (std::size_t c = 0; c < counts.size(); ++c) sums[block_of[c]] += counts[c];
  double worst = 0.0;
  for (const auto& s : sums) worst = std::max(worst, (s - target).cwiseAbs().maxCoeff());
  return worst;
}

} // namespace

std::vector<int> assign_blocks(const std::vector<ChoiceCard>& cards,
                               const std::vector<AttributeSpec>& attrs, int n_blocks,
                               std::uint64_t seed) {
  const int n = static_cast<int>(cards.size());
  if (n_blocks < 1 || n % n_blocks != 0)
    throw ValidationError("assign_blocks: card count not divisible by block count");

  BlockBalance balance(attrs);
  std::vector<Eigen::VectorXd> counts;
  counts.reserve(n);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(balance.n_levels_total);
  for (const auto& card : cards) {
    counts.push_back(balance.card_counts(card));
    total += counts.back();
  }
  const Eigen::VectorXd target = total / n_blocks;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix_seed(seed, 0x6b1f));
  std::shuffle(order.begin(), order.end(), rng);

  const int per_block = n / n_blocks;
  std::vector<int> block_of(n, 0);
  for (int i = 0; i < n; ++i) block_of[order[i]] = i / per_block;

  double current = balance_objective(counts, block_of, n_blocks, target);
  bool improved = true;
  while (improved) {
    improved = false;
    int best_i = -1;
    int best_j = -1;
    double best = current;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (block_of[i] == block_of[j]) continue;
        std::swap(block_of[i], block_of[j]);
        const double obj = balance_objective(counts, block_of, n_blocks, target);
        std::swap(block_of[i], block_of[j]);
        if (obj < best - 1e-12) {
          best = obj;
          best_i = i;
          best_j = j;
        }
      }
    if (best_i >= 0) {
      std::swap(block_of[best_i], block_of[best_j]);
      current = best;
      improved = true;
    }
  }

  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = block_of[i] + 1;
  return out;
}

} // namespace dce
