#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/model.hpp"

namespace zinb {

/// Per-time-step model states from the forward recursion, with the implicit
/// initial condition Z_t = V_t = e_t = 0 for t <= 0.
///
/// When gradients are requested, rows of d_w/d_m/d_e hold the derivatives of
/// W_t, M_t, e_t with respect to the flattened parameter vector
/// (beta, phi, theta, delta, alpha, gamma, k).
struct StateTrajectory {
    Eigen::VectorXd w;             // linear predictor of log-mean (after clamping)
    Eigen::VectorXd m;             // linear predictor of logit mixing (after clamping)
    Eigen::VectorXd z;             // ARMA state of W
    Eigen::VectorXd v;             // ARMA state of M
    Eigen::VectorXd e;             // standardized errors
    Eigen::VectorXd lambda;        // exp(W)
    Eigen::VectorXd pi;            // logistic(M); identically 0 without zero inflation
    Eigen::VectorXd one_minus_pi;  // computed directly for accuracy near pi = 1
    Eigen::VectorXd cond_mean;     // Lambda_t
    Eigen::VectorXd cond_var;      // Psi_t

    bool zero_inflation = true;
    int clamp_events = 0;      // times W or M hit the +-30 clamp
    int psi_floor_events = 0;  // times Psi fell below the floor (e_t forced to 0)

    bool gradients_stored = false;
    Eigen::MatrixXd d_w;  // N x P
    Eigen::MatrixXd d_m;  // N x P
    Eigen::MatrixXd d_e;  // N x P

    [[nodiscard]] int n() const { return static_cast<int>(w.size()); }
};

/// Clamp bound applied to both linear predictors before exp/logistic.
inline constexpr double kPredictorClamp = 30.0;
/// Variance floor below which e_t is defined as 0.
inline constexpr double kPsiFloor = 1e-12;

/// Runs the forward state recursion at `params` over designs X (N x n1) and
/// U (N x n2) and counts y. With `with_gradients`, forward-mode derivative
/// accumulators of W_t, M_t, e_t with respect to every parameter are filled.
StateTrajectory compute_states(const ParameterSet& params, const Eigen::MatrixXd& X,
                               const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                               bool with_gradients = false);

}  // namespace zinb
