#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/dataset.hpp"
#include "zinbarma/likelihood.hpp"
#include "zinbarma/model.hpp"
#include "zinbarma/states.hpp"

namespace zinb {

/// Converged parameters with uncertainty estimates for the free parameters
/// (pinned coefficients are excluded from se/cov and the parameter count).
struct FitResult {
    ModelSpec spec;
    ParameterSet params;
    std::vector<int> free_indices;         // into the flattened natural vector
    std::vector<std::string> free_names;
    Eigen::VectorXd se;                    // free, natural scale (k via delta method)
    Eigen::MatrixXd cov;                   // free x free, natural scale
    bool cov_valid = false;
    double loglik = 0.0;
    int n_obs = 0;
    int n_params = 0;                      // free count
    FitMethod method = FitMethod::NewtonRaphson;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;             // observed partial log-likelihood per iteration
    std::vector<std::string> warnings;
    StateTrajectory trajectory;            // states at the converged parameters

    /// Free parameter values in flattened order.
    [[nodiscard]] Eigen::VectorXd estimates() const;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Moment-based starting values: log-linear fit for beta, zero ARMA
/// coefficients, excess-zero logit for the delta intercept, method-of-moments
/// k from the positive counts. Throws ValidationError for all-zero data.
ParameterSet initialize(const Dataset& data, const ModelSpec& spec);

/// Newton-Raphson ascent on the partial log-likelihood with step halving and
/// a Levenberg-style ridge fallback. k is optimized on the log scale.
FitResult fit_newton_raphson(const Dataset& data, const ModelSpec& spec,
                             const ParameterSet& init);

/// EM: alternates the posterior zero-state E-step with a Newton M-step on the
/// complete-data objective. The observed partial log-likelihood is recorded
/// per outer iteration and must be non-decreasing.
FitResult fit_em(const Dataset& data, const ModelSpec& spec, const ParameterSet& init);

/// Dispatches on spec.estimation.method.
FitResult fit(const Dataset& data, const ModelSpec& spec);

/// Builds a FitResult at fixed parameters without optimizing (no se/cov).
/// Useful for evaluating diagnostics at known parameter values.
FitResult evaluate_at(const Dataset& data, const ModelSpec& spec, const ParameterSet& params);

/// Standard errors and 95% confidence intervals est +- 1.96 se for the free
/// parameters. Throws NumericalError when the information was not invertible.
std::pair<Eigen::VectorXd, std::vector<ConfidenceInterval>> standard_errors(
    const FitResult& fit);

struct WaldResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Wald test of C theta = zeta over the free parameters; C is m x n_params
/// with full row rank m.
WaldResult wald_test(const FitResult& fit, const Eigen::MatrixXd& C, const Eigen::VectorXd& zeta);

struct LrtResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Likelihood ratio test of nested fits: L = 2 (loglik_big - loglik_small).
LrtResult likelihood_ratio_test(const FitResult& fit_small, const FitResult& fit_big);

struct VuongResult {
    double z = 0.0;
    double p_value = 1.0;  // one-sided, favors the zero-inflated model for small p
};

/// One-sided Vuong test comparing a zero-inflated fit against a plain NB fit
/// on the same data (uncorrected statistic).
VuongResult vuong_test(const FitResult& fit_zinb, const FitResult& fit_nb, const Dataset& data);

/// The Vuong statistic from precomputed per-observation log-likelihood
/// differences: z = sqrt(N) mean(m)/sd(m). Errors when sd(m) = 0.
VuongResult vuong_from_differences(const Eigen::VectorXd& differences);

}  // namespace zinb
