#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dce::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
/// Domain (0,1); the endpoints map to -inf/+inf.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a,b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Upper tail P(F >= f) for the F distribution with (d1, d2) dof.
double f_survival(double f, double d1, double d2);

/// Gauss-Hermite rule for weight exp(-x^2) via Golub-Welsch.
/// E[g(Z)], Z~N(0,1) == sum_i weights[i]/sqrt(pi) * g(sqrt(2)*nodes[i]).
struct GaussHermite {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussHermite gauss_hermite(int n);

double mean(const std::vector<double>& v);
/// Sample standard deviation (n-1 denominator).
double sample_sd(const std::vector<double>& v);
/// Type-7 (linear interpolation) quantile, q in [0,1].
double quantile(std::vector<double> v, double q);

/// log(sum(exp(v))) with max subtraction.
double log_sum_exp(const Eigen::VectorXd& v);

} // namespace dce::stats
