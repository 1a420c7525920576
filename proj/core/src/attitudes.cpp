#include "dcekit/attitudes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "dcekit/parallel.hpp"
#include "dcekit/stats.hpp"

namespace dce {

double attitude_covariate(const AttitudeRow& row, const std::string& name) {
  if (name == "age") return row.age;
  if (name == "female") return row.female;
  if (name == "tourist") return row.tourist;
  if (name == "education") return row.education;
  if (name == "income") return row.income;
  if (name == "fix_income") return row.fix_income;
  if (name == "campaign") return row.campaign;
  throw ValidationError("unknown attitude covariate '" + name + "'");
}

namespace {

// Group label per respondent; empty optional encoded as empty string + flag.
std::vector<std::pair<bool, std::string>> grouping_labels(const AttitudeDataset& data,
                                                          const std::string& grouping) {
  std::vector<std::pair<bool, std::string>> out;
  out.reserve(data.respondents.size());
  for (const auto& row : data.respondents) {
    if (grouping == "town") {
      out.emplace_back(!row.town.empty(), row.town);
    } else {
      const double v = attitude_covariate(row, grouping);
      if (std::isnan(v)) {
        out.emplace_back(false, "");
      } else {
        out.emplace_back(true, format_number(v));
      }
    }
  }
  return out;
}

} // namespace

GroupMeans group_means(const AttitudeDataset& data, const std::string& grouping) {
  const auto labels = grouping_labels(data, grouping);
  std::map<std::string, int> index;
  for (const auto& [ok, label] : labels)
    if (ok) index.emplace(label, 0);
  if (index.size() < 2) throw ValidationError("group_means: grouping has < 2 groups");

  GroupMeans out;
  for (auto& [label, idx] : index) {
    idx = static_cast<int>(out.groups.size());
    out.groups.push_back(label);
  }
  const int g = static_cast<int>(out.groups.size());
  out.group_sizes.assign(g, 0);
  out.means = Eigen::MatrixXd::Zero(AttitudeDataset::kItems, g);

  for (std::size_t i = 0; i < data.respondents.size(); ++i) {
    if (!labels[i].first) continue;
    const int gi = index.at(labels[i].second);
    ++out.group_sizes[gi];
    for (int item = 0; item < AttitudeDataset::kItems; ++item)
      out.means(item, gi) += data.respondents[i].items[item];
  }
  for (int gi = 0; gi < g; ++gi) {
    if (out.group_sizes[gi] == 0) throw ValidationError("group_means: empty group");
    out.means.col(gi) /= out.group_sizes[gi];
  }
  return out;
}

AnovaResult anova_f_groups(const std::vector<std::vector<double>>& groups) {
  const int k = static_cast<int>(groups.size());
  if (k < 2) throw ValidationError("anova: need >= 2 groups");
  int n = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw ValidationError("anova: empty group");
    n += static_cast<int>(g.size());
    for (double x : g) grand_sum += x;
  }
  if (n <= k) throw ValidationError("anova: total observations must exceed group count");
  const double grand = grand_sum / n;

  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    double m = 0.0;
    for (double x : g) m += x;
    m /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }

  AnovaResult res;
  res.df_between = k - 1;
  res.df_within = n - k;
  if (ssw == 0.0) {
    if (ssb == 0.0) {
      res.f = 0.0;
      res.p_value = 1.0;
    } else {
      res.f = std::numeric_limits<double>::infinity();
      res.p_value = 0.0;
    }
    return res;
  }
  res.f = (ssb / res.df_between) / (ssw / res.df_within);
  res.p_value = stats::f_survival(res.f, res.df_between, res.df_within);
  return res;
}

AnovaResult anova_f(const AttitudeDataset& data, int item, const std::string& grouping) {
  if (item < 0 || item >= AttitudeDataset::kItems)
    throw ValidationError("anova_f: item index out of range");
  const auto labels = grouping_labels(data, grouping);
  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < data.respondents.size(); ++i) {
    if (!labels[i].first) continue;
    by_group[labels[i].second].push_back(data.respondents[i].items[item]);
  }
  std::vector<std::vector<double>> groups;
  groups.reserve(by_group.size());
  for (auto& [label, values] : by_group) groups.push_back(std::move(values));
  return anova_f_groups(groups);
}

Dendrogram ward_cluster(const Eigen::MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw ValidationError("ward_cluster: need >= 2 points");

  const int total = 2 * n - 1;
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(total, total);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      dist(i, j) = d;
      dist(j, i) = d;
    }

  std::vector<int> size(total, 1);
  std::vector<bool> active(total, false);
  std::fill(active.begin(), active.begin() + n, true);

  Dendrogram tree;
  tree.n_leaves = n;
  tree.merges.reserve(n - 1);

  for (int step = 0; step < n - 1; ++step) {
    int best_i = -1;
    int best_j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n + step; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n + step; ++j) {
        if (!active[j]) continue;
        if (dist(i, j) < best) {
          best = dist(i, j);
          best_i = i;
          best_j = j;
        }
      }
    }

    const int m = n + step;
    tree.merges.push_back({best_i, best_j, best});
    const double ni = size[best_i];
    const double nj = size[best_j];
    for (int k = 0; k < m; ++k) {
      if (!active[k] || k == best_i || k == best_j) continue;
      const double nk = size[k];
      const double d = ((ni + nk) * dist(best_i, k) + (nj + nk) * dist(best_j, k) -
                        nk * best) /
                       (ni + nj + nk);
      dist(m, k) = d;
      dist(k, m) = d;
    }
    size[m] = size[best_i] + size[best_j];
    active[best_i] = false;
    active[best_j] = false;
    active[m] = true;
  }
  return tree;
}

double agglomerative_coefficient(const Dendrogram& tree) {
  const int n = tree.n_leaves;
  if (n < 2 || tree.merges.empty()) return 0.0;
  const double h_final = tree.merges.back().height;
  if (!(h_final > 0.0)) return 0.0;
  std::vector<double> first(n, -1.0);
  for (const auto& m : tree.merges) {
    if (m.left < n && first[m.left] < 0.0) first[m.left] = m.height;
    if (m.right < n && first[m.right] < 0.0) first[m.right] = m.height;
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += 1.0 - first[i] / h_final;
  return acc / n;
}

std::vector<int> cut_tree(const Dendrogram& tree, int k) {
  const int n = tree.n_leaves;
  if (k < 1 || k > n) throw ValidationError("cut_tree: k out of range");

  std::vector<int> parent(2 * n - 1);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    const auto& merge = tree.merges[m];
    parent[find(merge.left)] = n + m;
    parent[find(merge.right)] = n + m;
  }

  // Number the surviving clusters by their smallest leaf.
  std::map<int, int> label_of_root;
  std::vector<int> labels(n, 0);
  int next = 1;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    auto [it, inserted] = label_of_root.emplace(root, next);
    if (inserted) ++next;
    labels[i] = it->second;
  }
  return labels;
}

namespace {

double within_dispersion(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                         int k) {
  const int d = static_cast<int>(points.cols());
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, d);
  std::vector<int> counts(k, 0);
  for (int i = 0; i < points.rows(); ++i) {
    centroids.row(labels[i] - 1) += points.row(i);
    ++counts[labels[i] - 1];
  }
  for (int c = 0; c < k; ++c)
    if (counts[c] > 0) centroids.row(c) /= counts[c];
  double w = 0.0;
  for (int i = 0; i < points.rows(); ++i)
    w += (points.row(i) - centroids.row(labels[i] - 1)).squaredNorm();
  return w;
}

Eigen::VectorXd log_dispersions(const Eigen::MatrixXd& points, int k_min, int k_max) {
  const Dendrogram tree = ward_cluster(points);
  Eigen::VectorXd out(k_max - k_min + 1);
  for (int k = k_min; k <= k_max; ++k) {
    const auto labels = cut_tree(tree, k);
    out(k - k_min) = std::log(within_dispersion(points, labels, k));
  }
  return out;
}

} // namespace

GapResult gap_statistic(const Eigen::MatrixXd& points, int k_min, int k_max, int B,
                        std::uint64_t seed, int threads) {
  if (B < 10) throw ValidationError("gap_statistic: B must be >= 10");
  if (k_min < 1 || k_max < k_min) throw ValidationError("gap_statistic: bad k range");
  if (k_max > points.rows()) throw ValidationError("gap_statistic: k range exceeds n");

  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  const int nk = k_max - k_min + 1;

  GapResult res;
  for (int k = k_min; k <= k_max; ++k) res.ks.push_back(k);
  res.log_w = log_dispersions(points, k_min, k_max);

  const Eigen::RowVectorXd lo = points.colwise().minCoeff();
  const Eigen::RowVectorXd hi = points.colwise().maxCoeff();

  // One uniform reference set per bootstrap, seeded independently.
  Eigen::MatrixXd ref_log_w(B, nk);
  parallel_for(B, threads, [&](int b) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd ref(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) ref(i, j) = lo(j) + (hi(j) - lo(j)) * unit(rng);
    ref_log_w.row(b) = log_dispersions(ref, k_min, k_max).transpose();
  });

  res.log_w_ref_mean = ref_log_w.colwise().mean();
  res.gap = res.log_w_ref_mean - res.log_w;
  res.s_k.resize(nk);
  for (int c = 0; c < nk; ++c) {
    const double m = res.log_w_ref_mean(c);
    double var = 0.0;
    for (int b = 0; b < B; ++b) var += (ref_log_w(b, c) - m) * (ref_log_w(b, c) - m);
    var /= B;
    res.s_k(c) = std::sqrt(var) * std::sqrt(1.0 + 1.0 / B);
  }

  res.chosen_k = -1;
  for (int c = 0; c + 1 < nk; ++c) {
    if (res.gap(c) >= res.gap(c + 1) - res.s_k(c + 1)) {
      res.chosen_k = res.ks[c];
      break;
    }
  }
  if (res.chosen_k < 0) {
    // No k satisfied the rule inside the range; fall back to the largest gap.
    int best = 0;
    for (int c = 1; c < nk; ++c)
      if (res.gap(c) > res.gap(best)) best = c;
    res.chosen_k = res.ks[best];
  }
  return res;
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (int j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    out.col(j).array() -= mean;
    const double sd = std::sqrt(out.col(j).squaredNorm() / (m.rows() - 1));
    if (sd > 0.0) out.col(j) /= sd;
  }
  return out;
}

Eigen::MatrixXd attitude_item_matrix(const AttitudeDataset& data) {
  Eigen::MatrixXd m(data.respondents.size(), AttitudeDataset::kItems);
  for (std::size_t i = 0; i < data.respondents.size(); ++i)
    for (int j = 0; j < AttitudeDataset::kItems; ++j)
      m(static_cast<Eigen::Index>(i), j) = data.respondents[i].items[j];
  return m;
}

LogitResult fit_logistic(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                         std::vector<std::string> names, const LogitConfig& config) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  if (y.size() != n) throw ValidationError("fit_logistic: y/X size mismatch");
  const double y_sum = y.sum();
  if (y_sum <= 0.0 || y_sum >= n)
    throw ValidationError("fit_logistic: y must contain both classes");

  if (names.empty())
    for (int j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    std::string culprits;
    const auto perm = qr.colsPermutation().indices();
    for (int i = static_cast<int>(qr.rank()); i < k; ++i) {
      if (!culprits.empty()) culprits += ", ";
      culprits += names[perm(i)];
    }
    throw ValidationError("fit_logistic: rank-deficient X; collinear columns: " + culprits);
  }

  LogitResult res;
  res.names = std::move(names);
  res.n_obs = n;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);

  auto loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = x * b;
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      // log sigma(eta) and log sigma(-eta) without overflow
      const double e = eta(i);
      const double log_p = e > 0 ? -std::log1p(std::exp(-e)) : e - std::log1p(std::exp(e));
      const double log_q = e > 0 ? -e - std::log1p(std::exp(-e)) : -std::log1p(std::exp(e));
      ll += y(i) * log_p + (1.0 - y(i)) * log_q;
    }
    return ll;
  };

  double ll = loglik(beta);
  Eigen::MatrixXd fisher;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    res.iterations = iter;
    const Eigen::VectorXd eta = x * beta;
    const Eigen::VectorXd p = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    const Eigen::VectorXd w = p.array() * (1.0 - p.array());
    const Eigen::VectorXd grad = x.transpose() * (y - p);
    if (grad.lpNorm<Eigen::Infinity>() < config.tol) {
      res.converged = true;
      res.iterations = iter - 1;
      break;
    }
    fisher = x.transpose() * w.asDiagonal() * x;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(fisher);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      res.message = "IRLS step failed (weights collapsed)";
      break;
    }
    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const Eigen::VectorXd cand = beta + scale * step;
      const double cand_ll = loglik(cand);
      if (cand_ll > ll - 1e-14) {
        beta = cand;
        ll = cand_ll;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
    if (beta.lpNorm<Eigen::Infinity>() > 30.0) {
      res.message = "divergence: possible complete separation";
      break;
    }
  }

  const Eigen::VectorXd eta = x * beta;
  const Eigen::VectorXd p = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
  const Eigen::VectorXd w = p.array() * (1.0 - p.array());
  fisher = x.transpose() * w.asDiagonal() * x;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(fisher);
  res.coef = beta;
  res.log_likelihood = ll;
  res.aic = 2.0 * k - 2.0 * ll;
  if (lu.isInvertible()) {
    res.covariance = lu.inverse();
    res.std_error = res.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  } else {
    res.std_error = Eigen::VectorXd::Zero(k);
  }
  if (!res.converged && res.message.empty())
    res.message = "non-convergence: max iterations reached";
  return res;
}

} // namespace dce
