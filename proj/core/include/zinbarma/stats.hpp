#pragma once

#include <Eigen/Dense>

namespace zinb::stats {

/// Digamma function psi0(x). Absolute error below 1e-12 for x >= 1e-3.
double digamma(double x);

/// log(1 + exp(x)) without overflow.
double softplus(double x);

/// log(exp(a) + exp(b)) without overflow; handles -inf arguments.
double log_sum_exp(double a, double b);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile function (inverse CDF), p in (0, 1).
double normal_quantile(double p);

/// Upper tail probability P(X > x) for X ~ chi-squared(df).
double chi_squared_sf(double x, double df);

struct KsResult {
    double statistic = 0.0;  // sup |F_emp - F_ref|
    double p_value = 1.0;    // asymptotic (Kolmogorov distribution)
};

/// One-sample Kolmogorov-Smirnov test of `sample` against the standard
/// normal distribution.
KsResult ks_test_standard_normal(const Eigen::VectorXd& sample);

/// One-sample KS test against uniform(0,1).
KsResult ks_test_uniform(const Eigen::VectorXd& sample);

double mean(const Eigen::VectorXd& v);
/// Unbiased sample variance (denominator n-1); requires n >= 2.
double sample_variance(const Eigen::VectorXd& v);

}  // namespace zinb::stats
