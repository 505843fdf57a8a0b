#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/model.hpp"
#include "zinbarma/states.hpp"

namespace zinb {

/// Partial log-likelihood PL(Theta) = sum_t log f(y_t | H_t).
/// Throws NumericalError (naming the first offending t) when non-finite.
double partial_loglik(const ParameterSet& params, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y);

/// Per-observation log-likelihood contributions (length N).
Eigen::VectorXd per_observation_loglik(const ParameterSet& params, const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& U,
                                       const std::vector<std::int64_t>& y);

/// Analytic score dPL/dTheta in the natural parameterization, assembled by
/// forward-mode accumulation through the state recursions. Length equals the
/// flattened parameter count (beta, phi, theta, delta, alpha, gamma, k).
Eigen::VectorXd score(const ParameterSet& params, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y);

/// Observed information -d2 PL / dTheta dTheta', via central finite
/// differences of the analytic score (step max(1e-5, 1e-5 |theta_i|)),
/// symmetrized as (H + H')/2.
Eigen::MatrixXd observed_information(const ParameterSet& params, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& U,
                                     const std::vector<std::int64_t>& y);

/// EM complete-data objective Q(Theta | s_hat): Bernoulli part in s_hat plus
/// NB terms weighted by (1 - s_hat).
double q_function(const ParameterSet& params, const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                  const std::vector<std::int64_t>& y, const Eigen::VectorXd& s_hat);

/// Gradient of q_function with respect to the natural parameters.
Eigen::VectorXd q_score(const ParameterSet& params, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                        const Eigen::VectorXd& s_hat);

/// Posterior zero-state probabilities s_hat_t = P(degenerate state | y, H_t);
/// exactly 0 wherever y_t > 0.
Eigen::VectorXd e_step(const ParameterSet& params, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y);

namespace detail {
/// partial_loglik that reports failure as -inf instead of throwing; used by
/// line searches that probe inadmissible regions.
double partial_loglik_or_neg_inf(const ParameterSet& params, const Eigen::MatrixXd& X,
                                 const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y);
double q_function_or_neg_inf(const ParameterSet& params, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                             const Eigen::VectorXd& s_hat);
}  // namespace detail

}  // namespace zinb
