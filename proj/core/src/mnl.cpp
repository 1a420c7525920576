#include "dcekit/mnl.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dcekit/parallel.hpp"

namespace dce {

Eigen::VectorXd mnl_probabilities(const Eigen::VectorXd& beta,
                                  const Eigen::MatrixXd& task_x) {
  if (task_x.rows() < 2) throw ValidationError("mnl_probabilities: need >= 2 alternatives");
  Eigen::VectorXd u = task_x * beta;
  const double m = u.maxCoeff();
  Eigen::VectorXd p = (u.array() - m).exp();
  p /= p.sum();
  return p;
}

namespace {

// Per-respondent pieces evaluated in parallel, reduced in respondent order.
template <typename PerTask>
void for_each_task_of(const PanelData& panel, int r, const PerTask& fn) {
  const int t_begin = panel.resp_task_begin(r);
  const int t_end = panel.resp_task_begin(r + 1);
  for (int t = t_begin; t < t_end; ++t) fn(t);
}

} // namespace

double mnl_loglik(const Eigen::VectorXd& beta, const PanelData& panel, int threads) {
  const int n = panel.n_respondents();
  const int J = panel.n_alternatives();
  const Eigen::VectorXd u_fixed = panel.x_fixed() * beta.head(panel.x_fixed().cols());
  const Eigen::VectorXd u_random =
      panel.x_random().cols() > 0
          ? Eigen::VectorXd(panel.x_random() * beta.tail(panel.x_random().cols()))
          : Eigen::VectorXd::Zero(panel.n_rows());

  std::vector<double> partial(n, 0.0);
  parallel_for(n, threads, [&](int r) {
    double ll = 0.0;
    for_each_task_of(panel, r, [&](int t) {
      const int row0 = panel.task_row_begin(t);
      const auto u = (u_fixed.segment(row0, J) + u_random.segment(row0, J)).eval();
      const double m = u.maxCoeff();
      const double lse = m + std::log((u.array() - m).exp().sum());
      ll += u(panel.task_chosen(t)) - lse;
    });
    partial[r] = ll;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

Eigen::VectorXd mnl_gradient(const Eigen::VectorXd& beta, const PanelData& panel,
                             int threads) {
  const int n = panel.n_respondents();
  const int J = panel.n_alternatives();
  const int K = static_cast<int>(beta.size());
  const Eigen::MatrixXd x = panel.x_all();
  const Eigen::VectorXd u_all = x * beta;

  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(K, n);
  parallel_for(n, threads, [&](int r) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(K);
    for_each_task_of(panel, r, [&](int t) {
      const int row0 = panel.task_row_begin(t);
      const auto u = u_all.segment(row0, J);
      const double m = u.maxCoeff();
      Eigen::VectorXd p = (u.array() - m).exp();
      p /= p.sum();
      g += x.row(row0 + panel.task_chosen(t)).transpose();
      g.noalias() -= x.middleRows(row0, J).transpose() * p;
    });
    partial.col(r) = g;
  });
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(K);
  for (int r = 0; r < n; ++r) grad += partial.col(r);
  return grad;
}

Eigen::MatrixXd mnl_hessian(const Eigen::VectorXd& beta, const PanelData& panel,
                            int threads) {
  const int n = panel.n_respondents();
  const int J = panel.n_alternatives();
  const int K = static_cast<int>(beta.size());
  const Eigen::MatrixXd x = panel.x_all();
  const Eigen::VectorXd u_all = x * beta;

  std::vector<Eigen::MatrixXd> partial(n);
  parallel_for(n, threads, [&](int r) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(K, K);
    for_each_task_of(panel, r, [&](int t) {
      const int row0 = panel.task_row_begin(t);
      const auto u = u_all.segment(row0, J);
      const double m = u.maxCoeff();
      Eigen::VectorXd p = (u.array() - m).exp();
      p /= p.sum();
      const auto xt = x.middleRows(row0, J);
      const Eigen::VectorXd xbar = xt.transpose() * p;
      h.noalias() -= xt.transpose() * p.asDiagonal() * xt;
      h.noalias() += xbar * xbar.transpose();
    });
    partial[r] = h;
  });
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(K, K);
  for (int r = 0; r < n; ++r) hess += partial[r];
  return hess;
}

MnlFit fit_mnl_panel(const PanelData& panel, const MnlConfig& config) {
  const int K = static_cast<int>(panel.x_fixed().cols() + panel.x_random().cols());
  MnlFit fit;
  fit.theta = Eigen::VectorXd::Zero(K);
  double ll = mnl_loglik(fit.theta, panel, config.threads);

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd g = mnl_gradient(fit.theta, panel, config.threads);
    if (g.lpNorm<Eigen::Infinity>() < config.tol) {
      fit.converged = true;
      fit.iterations = iter - 1;
      break;
    }
    const Eigen::MatrixXd h = mnl_hessian(fit.theta, panel, config.threads);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-h);
    Eigen::VectorXd step = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite())
      throw NumericalError("fit_mnl: Newton step failed (singular Hessian)");

    // Step-halving until the likelihood improves.
    double scale = 1.0;
    bool accepted = false;
    for (int h_iter = 0; h_iter < 40; ++h_iter) {
      const Eigen::VectorXd cand = fit.theta + scale * step;
      const double cand_ll = mnl_loglik(cand, panel, config.threads);
      if (cand_ll > ll - 1e-14) {
        fit.theta = cand;
        ll = cand_ll;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break; // no ascent direction left at this scale
  }

  fit.log_likelihood = ll;
  if (!fit.converged) {
    // Probabilities driven to one (separation) leave the gradient flat but
    // the parameters divergent.
    fit.message = fit.theta.lpNorm<Eigen::Infinity>() > 25.0
                      ? "non-convergence: possible separation (probabilities -> 1)"
                      : "non-convergence: max iterations reached";
  }

  const Eigen::MatrixXd h = mnl_hessian(fit.theta, panel, config.threads);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(-h);
  if (lu.isInvertible()) {
    fit.covariance = lu.inverse();
  } else {
    fit.covariance = Eigen::MatrixXd();
  }
  return fit;
}

namespace {

void check_rank(const PanelData& panel) {
  const Eigen::MatrixXd x = panel.x_all();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  if (rank == x.cols()) return;
  std::vector<std::string> names = panel.fixed_names();
  names.insert(names.end(), panel.random_names().begin(), panel.random_names().end());
  // Columns pivoted past the numerical rank are the collinear ones.
  std::string culprits;
  const auto perm = qr.colsPermutation().indices();
  for (int i = rank; i < x.cols(); ++i) {
    if (!culprits.empty()) culprits += ", ";
    culprits += names[perm(i)];
  }
  throw ValidationError("design matrix is rank deficient; collinear columns: " + culprits);
}

} // namespace

EstimationResult fit_mnl(const ChoiceDataset& data, const ModelSpec& spec,
                         const MnlConfig& config) {
  PanelData panel(data, spec);
  check_rank(panel);
  const MnlFit fit = fit_mnl_panel(panel, config);
  const ParameterLayout layout = mnl_layout(data.attributes(), spec);
  EstimationResult res =
      make_result(layout, fit.theta, fit.covariance, fit.log_likelihood, panel.n_tasks(),
                  panel.n_respondents(), fit.converged, fit.iterations);
  res.std_errors_reliable = fit.covariance.rows() > 0;
  return res;
}

} // namespace dce
