#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/estimation.hpp"
#include "zinbarma/model.hpp"

namespace zinb {

/// Deterministic stream split: derives an independent sub-seed from a master
/// seed and a stream index (bit-exact regardless of thread count).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Simulates a ZINB-ARMA series of length X.rows() forward in time. At each
/// t the zero state is drawn as Bernoulli(pi_t); otherwise the count is drawn
/// through the gamma-Poisson hierarchy y ~ Poisson(lambda_t w), w ~
/// Gamma(k, k). The realized count feeds the standardized error recursion.
///
/// AR polynomial roots inside the unit circle are an error (the forward
/// recursion would be unstable). MA roots are not checked here: a finite MA
/// driven by standardized errors simulates stably even when non-invertible;
/// use check_polynomial_roots to surface advisories.
std::vector<std::int64_t> simulate_series(const ParameterSet& params, const Eigen::MatrixXd& X,
                                          const Eigen::MatrixXd& U, std::uint64_t seed);

enum class StudyEstimator { Em, NewtonRaphson, Both };

struct McStudyConfig {
    ModelSpec spec;
    ParameterSet truth;
    std::vector<int> sample_sizes{30, 100, 500};
    int replications = 1000;
    StudyEstimator estimator = StudyEstimator::Em;
    std::uint64_t seed = 0;

    void validate() const;
};

struct McParameterSummary {
    std::string name;
    double true_value = 0.0;
    double mean_estimate = 0.0;
    std::optional<double> se_of_mean;     // absent when only one replicate converged
    double abs_bias = 0.0;                // |mean_estimate - true_value|
    std::optional<double> ci_lower, ci_upper;  // mean +- 1.96 se_of_mean
};

/// Monte Carlo summary for one (sample size, estimator) cell, plus the raw
/// replicate estimate and standard error matrices for QQ export.
struct McSummary {
    int sample_size = 0;
    FitMethod method = FitMethod::Em;
    std::vector<McParameterSummary> parameters;
    Eigen::MatrixXd estimates;  // converged replicates x free parameters
    Eigen::MatrixXd ses;        // same shape; NaN where unavailable
    int attempted = 0;
    int converged = 0;
    bool valid = false;  // at least 80% of replicates converged
};

/// Simulate-fit replications over every configured sample size (and both
/// estimators when requested). Replicates run in parallel and are reduced in
/// replicate order, so results depend only on the configuration and seed.
/// Non-convergent replicates are dropped and counted.
std::vector<McSummary> run_mc_study(const McStudyConfig& config);

struct QqPoint {
    double theoretical = 0.0;
    double sample = 0.0;
};

/// Normal QQ data for standardized estimates (est - true)/se, one point set
/// per parameter, using plotting positions (i - 0.5)/n. Requires >= 20
/// replicates, positive ses, and non-constant estimate columns.
std::vector<std::vector<QqPoint>> estimator_qq_data(const Eigen::MatrixXd& estimates,
                                                    const Eigen::VectorXd& true_values,
                                                    const Eigen::MatrixXd& ses);

}  // namespace zinb
