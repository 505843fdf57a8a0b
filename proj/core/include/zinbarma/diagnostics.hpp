#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/dataset.hpp"
#include "zinbarma/distribution.hpp"
#include "zinbarma/estimation.hpp"

namespace zinb {

/// Goodness-of-fit metrics. Identities: aic = -2 loglik + 2 p,
/// bic = -2 loglik + p log N, df = N - p.
struct GofSummary {
    double mse = 0.0;
    double mad = 0.0;
    double pearson_chi2 = 0.0;
    double deviance = 0.0;
    int df = 0;
    double aic = 0.0;
    double bic = 0.0;
    double loglik = 0.0;
    int n_params = 0;
    int n_obs = 0;
};

/// Residual-based and information-criterion summary of a converged fit. The
/// deviance baseline maximizes each per-observation likelihood: pi = 1 for
/// zero counts, pi = 0 and lambda = y_t for positive counts (same k).
GofSummary gof_summary(const FitResult& fit, const Dataset& data);

/// Dunn-Smyth randomized quantile residuals: u_t drawn uniformly from
/// (F(y_t - 1), F(y_t)] under the fitted distribution at t, mapped through
/// the standard normal quantile. Deterministic given the seed; `midpoint`
/// replaces the draw by the interval midpoint for reproducible pipelines.
Eigen::VectorXd randomized_quantile_residuals(const FitResult& fit, const Dataset& data,
                                              std::uint64_t seed, bool midpoint = false);

struct AcfResult {
    Eigen::VectorXd acf;   // lags 0..max_lag (acf(0) = 1)
    Eigen::VectorXd pacf;  // lags 1..max_lag, Durbin-Levinson
};

AcfResult acf_pacf(const Eigen::VectorXd& series, int max_lag);

struct LjungBoxResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Q = N(N+2) sum_{h<=L} acf(h)^2/(N-h); p-value from chi-squared with
/// L - fitted_df degrees of freedom, floored at 1.
LjungBoxResult ljung_box(const Eigen::VectorXd& residuals, int max_lag, int fitted_df);

/// Same statistic computed from precomputed autocorrelations (lags 1..L).
LjungBoxResult ljung_box_from_acf(const Eigen::VectorXd& acf_tail, int n, int fitted_df);

/// Average probability of an excess zero:
/// (#zeros - sum over zero observations of the fitted NB zero mass) / N.
/// May be negative when the NB part over-predicts zeros.
double excess_zero_probability(const FitResult& fit, const Dataset& data);

/// The same quantity from precomputed aggregates.
double excess_zero_from_aggregates(int zero_count, double nb_zero_mass_sum, int n);

struct ZeroClassificationRow {
    double threshold = 0.0;
    std::optional<double> sensitivity;  // absent when no zeros observed
    std::optional<double> specificity;  // absent when no positives observed
};

/// Threshold sweep of zero prediction: predicted zero iff fitted conditional
/// mean < threshold. Sensitivity = zeros predicted zero, specificity =
/// positives predicted positive.
std::vector<ZeroClassificationRow> zero_classification_table(
    const FitResult& fit, const Dataset& data, const std::vector<double>& thresholds);

struct ForecastResult {
    double lambda_hat = 0.0;
    double pi_hat = 0.0;
    double conditional_mean = 0.0;              // Lambda_{N+1}
    ZinbDistribution distribution{1.0, 0.0, 1.0};  // for predictive pmf/interval queries
};

/// One-step-ahead forecast: extends the ARMA recursions past the sample end
/// using the stored state history and the supplied covariate rows.
ForecastResult one_step_forecast(const FitResult& fit, const Eigen::VectorXd& x_next,
                                 const Eigen::VectorXd& u_next);

}  // namespace zinb
