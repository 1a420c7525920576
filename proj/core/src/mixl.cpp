#include "dcekit/mixl.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dcekit/mnl.hpp"
#include "dcekit/parallel.hpp"

namespace dce {

double simulated_loglik(const Eigen::VectorXd& theta, const PanelData& panel,
                        const DrawMatrix& draws, int threads) {
  const int F = static_cast<int>(panel.x_fixed().cols());
  const int R = static_cast<int>(panel.x_random().cols());
  const int J = panel.n_alternatives();
  const int n = panel.n_respondents();
  const int D = draws.n_draws();
  if (R == 0) throw ValidationError("simulated_loglik: model has no random coefficients");
  if (draws.dims() != R || draws.n_respondents() < n)
    throw ValidationError("simulated_loglik: draw matrix shape mismatch");
  if (theta.size() != F + 2 * R)
    throw ValidationError("simulated_loglik: theta size mismatch");

  const Eigen::VectorXd means = theta.segment(F, R);
  const Eigen::VectorXd spreads = theta.segment(F + R, R).cwiseAbs();
  const Eigen::VectorXd u_fixed =
      F > 0 ? Eigen::VectorXd(panel.x_fixed() * theta.head(F))
            : Eigen::VectorXd::Zero(panel.n_rows());
  const double log_d = std::log(static_cast<double>(D));

  std::vector<double> partial(n, 0.0);
  parallel_for(n, threads, [&](int r) {
    const int t_begin = panel.resp_task_begin(r);
    const int t_end = panel.resp_task_begin(r + 1);
    const int row0 = panel.task_row_begin(t_begin);
    const int n_rows = (t_end - t_begin) * J;

    // Coefficient draws for this respondent: R x D.
    Eigen::MatrixXd b = spreads.asDiagonal() * draws.respondent_block(r);
    b.colwise() += means;

    // Utilities draw-major (D x rows) so the per-task softmax runs over
    // contiguous columns.
    Eigen::MatrixXd u = b.transpose() * panel.x_random().middleRows(row0, n_rows).transpose();
    u.rowwise() += u_fixed.segment(row0, n_rows).transpose();

    Eigen::ArrayXd log_prod = Eigen::ArrayXd::Zero(D);
    Eigen::ArrayXd m(D);
    Eigen::ArrayXd denom(D);
    for (int t = t_begin; t < t_end; ++t) {
      const int local = (t - t_begin) * J;
      m = u.col(local);
      for (int j = 1; j < J; ++j) m = m.max(u.col(local + j).array());
      denom.setZero();
      for (int j = 0; j < J; ++j) denom += (u.col(local + j).array() - m).exp();
      log_prod += (u.col(local + panel.task_chosen(t)).array() - m) - denom.log();
    }
    const double lp_max = log_prod.maxCoeff();
    partial[r] = lp_max + std::log((log_prod - lp_max).exp().sum()) - log_d;
  });

  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& theta, double rel_step) {
  const int k = static_cast<int>(theta.size());
  Eigen::VectorXd g(k);
  Eigen::VectorXd x = theta;
  for (int i = 0; i < k; ++i) {
    const double h = rel_step * std::max(1.0, std::abs(theta(i)));
    x(i) = theta(i) + h;
    const double up = fn(x);
    x(i) = theta(i) - h;
    const double dn = fn(x);
    x(i) = theta(i);
    g(i) = (up - dn) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& fn,
                           const Eigen::VectorXd& theta, double grad_rel_step,
                           double hess_rel_step) {
  const int k = static_cast<int>(theta.size());
  Eigen::MatrixXd hess(k, k);
  Eigen::VectorXd x = theta;
  for (int i = 0; i < k; ++i) {
    const double h = hess_rel_step * std::max(1.0, std::abs(theta(i)));
    x(i) = theta(i) + h;
    const Eigen::VectorXd g_up = fd_gradient(fn, x, grad_rel_step);
    x(i) = theta(i) - h;
    const Eigen::VectorXd g_dn = fd_gradient(fn, x, grad_rel_step);
    x(i) = theta(i);
    hess.col(i) = (g_up - g_dn) / (2.0 * h);
  }
  return hess;
}

MixlFit fit_mixl_panel(const PanelData& panel, const DrawMatrix& draws,
                       const Eigen::VectorXd& theta0, const MixlConfig& config) {
  const auto objective = [&](const Eigen::VectorXd& t) {
    return simulated_loglik(t, panel, draws, config.threads);
  };
  const int k = static_cast<int>(theta0.size());

  MixlFit fit;
  fit.theta = theta0;
  double ll = objective(fit.theta);
  Eigen::VectorXd grad = fd_gradient(objective, fit.theta, config.fd_step);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(k, k);

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    fit.iterations = iter;
    Eigen::VectorXd direction = h_inv * grad; // ascent
    if (grad.dot(direction) <= 0.0) {
      h_inv.setIdentity();
      direction = grad;
    }

    // Backtracking Armijo line search.
    const double slope = grad.dot(direction);
    double alpha = 1.0;
    double cand_ll = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd cand;
    bool accepted = false;
    for (int ls = 0; ls < 45; ++ls) {
      cand = fit.theta + alpha * direction;
      cand_ll = objective(cand);
      if (std::isfinite(cand_ll) && cand_ll >= ll + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Flat to finite-difference precision; accept as converged only if
      // the gradient has also collapsed.
      fit.converged = grad.lpNorm<Eigen::Infinity>() < 1e-3;
      if (!fit.converged) fit.message = "line search failed before tolerances were met";
      break;
    }

    const Eigen::VectorXd step = cand - fit.theta;
    const double ll_change = cand_ll - ll;
    const Eigen::VectorXd grad_new = fd_gradient(objective, cand, config.fd_step);
    const Eigen::VectorXd y = grad_new - grad;

    fit.theta = cand;
    ll = cand_ll;
    grad = grad_new;

    if (step.lpNorm<Eigen::Infinity>() < config.tol_param &&
        std::abs(ll_change) < config.tol_loglik) {
      fit.converged = true;
      break;
    }

    // BFGS update on the ascent problem: y flips sign relative to the
    // textbook minimization form, so require s'(-y) > 0.
    const double sy = -step.dot(y);
    if (sy > 1e-12 * step.norm() * y.norm()) {
      const Eigen::VectorXd s = step;
      const Eigen::VectorXd my = -y;
      if (iter == 1) h_inv = (sy / my.squaredNorm()) * Eigen::MatrixXd::Identity(k, k);
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h_inv * my;
      const double yhy = my.dot(hy);
      h_inv += (rho * rho * yhy + rho) * (s * s.transpose());
      h_inv -= rho * (s * hy.transpose() + hy * s.transpose());
    }
  }

  if (!fit.converged && fit.message.empty())
    fit.message = "non-convergence: max iterations reached";
  fit.log_likelihood = ll;

  const Eigen::MatrixXd h_raw =
      fd_hessian(objective, fit.theta, config.fd_step, config.fd_hess_step);
  const Eigen::MatrixXd h_sym = 0.5 * (h_raw + h_raw.transpose());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(-h_sym);
  if (lu.isInvertible()) {
    fit.covariance = lu.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-h_sym);
    fit.std_errors_reliable = es.eigenvalues().minCoeff() > 0.0;
  } else {
    fit.covariance = Eigen::MatrixXd();
    fit.std_errors_reliable = false;
  }

  // The likelihood is even in every spread; report the positive branch and
  // carry the sign flip through the covariance.
  const int F = static_cast<int>(panel.x_fixed().cols());
  const int R = static_cast<int>(panel.x_random().cols());
  for (int i = 0; i < R; ++i) {
    const int idx = F + R + i;
    if (fit.theta(idx) < 0.0) {
      fit.theta(idx) = -fit.theta(idx);
      if (fit.covariance.rows() > 0) {
        fit.covariance.row(idx) *= -1.0;
        fit.covariance.col(idx) *= -1.0;
      }
    }
  }
  return fit;
}

EstimationResult fit_mixl(const ChoiceDataset& data, const ModelSpec& spec,
                          const MixlConfig& config) {
  spec.validate();
  if (spec.random_coefficients.empty())
    throw ValidationError("fit_mixl: model spec has no random coefficients");

  PanelData panel(data, spec);
  const ParameterLayout layout = mixl_layout(data.attributes(), spec);
  const int R = layout.n_random();

  MnlConfig mnl_config;
  mnl_config.threads = config.threads;
  const MnlFit start = fit_mnl_panel(panel, mnl_config);

  Eigen::VectorXd theta0(layout.size());
  theta0.head(start.theta.size()) = start.theta;
  theta0.tail(R).setConstant(0.5);

  const DrawMatrix draws = make_draws(panel.n_respondents(), config.n_draws, R,
                                      {config.generator, 50, config.seed});
  const MixlFit fit = fit_mixl_panel(panel, draws, theta0, config);

  EstimationResult res =
      make_result(layout, fit.theta, fit.covariance, fit.log_likelihood, panel.n_tasks(),
                  panel.n_respondents(), fit.converged, fit.iterations);
  res.std_errors_reliable = fit.std_errors_reliable;
  return res;
}

} // namespace dce
