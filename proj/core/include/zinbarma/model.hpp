#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/covariates.hpp"
#include "zinbarma/dataset.hpp"

namespace zinb {

/// Full parameter set of a ZINB-ARMA model.
///
/// The log-mean predictor uses W_t = x_t'beta + Z_t with ARMA state
///   Z_t = sum_i phi_i (Z_{t-i} + e_{t-i}) + sum_j theta_j e_{t-j},
/// and the logit mixing predictor uses M_t = u_t'delta + V_t with
///   V_t = sum_i alpha_i (V_{t-i} + e_{t-i}) + sum_j gamma_j e_{t-j}.
/// k > 0 is the negative binomial overdispersion parameter.
struct ParameterSet {
    Eigen::VectorXd beta;   // length n1
    Eigen::VectorXd phi;    // length p1
    Eigen::VectorXd theta;  // length q1
    Eigen::VectorXd delta;  // length n2
    Eigen::VectorXd alpha;  // length p2
    Eigen::VectorXd gamma;  // length q2
    double k = 1.0;

    [[nodiscard]] int total_size() const {
        return static_cast<int>(beta.size() + phi.size() + theta.size() + delta.size() +
                                alpha.size() + gamma.size()) +
               1;
    }

    /// Flattens to (beta, phi, theta, delta, alpha, gamma, k).
    [[nodiscard]] Eigen::VectorXd flatten() const;

    void validate() const;  // throws ValidationError if k <= 0 or entries non-finite
};

/// Coefficient families a fixed-value constraint can target.
enum class CoefFamily { Phi, Theta, Alpha, Gamma };

/// Pins one ARMA coefficient at a constant; it is excluded from the free
/// parameter vector used by the optimizers and from the parameter count.
struct FixedCoefficient {
    CoefFamily family = CoefFamily::Theta;
    int index = 1;  // 1-based within the family
    double value = 0.0;

    bool operator==(const FixedCoefficient&) const = default;
};

enum class FitMethod { NewtonRaphson, Em };

struct EstimationOptions {
    FitMethod method = FitMethod::Em;
    int max_iterations = 200;       // Newton-Raphson cap (also EM inner cap source)
    int em_max_iterations = 500;    // EM outer cap
    double step_tolerance = 1e-8;   // stop when max |step| falls below
    double loglik_tolerance = 1e-10;  // stop when |delta PL| falls below (NR)
    double em_tolerance = 1e-8;       // relative PL change stop (EM outer)
    int em_inner_max_iterations = 50;
    double em_inner_grad_tolerance = 1e-8;
    std::uint64_t seed = 0;

    bool operator==(const EstimationOptions&) const = default;
};

/// Model structure: ARMA orders, covariate recipes for both predictors,
/// optional fixed coefficients, estimation controls.
struct ModelSpec {
    int p1 = 0, q1 = 0;  // AR/MA orders of the log-mean state
    int p2 = 0, q2 = 0;  // AR/MA orders of the logit state
    std::vector<CovariateRecipe> w_covariates;
    std::vector<CovariateRecipe> m_covariates;
    bool zero_inflated = true;  // false: pure NB-ARMA, pi_t = 0, no delta/alpha/gamma
    std::vector<FixedCoefficient> fixed;
    EstimationOptions estimation;

    [[nodiscard]] int n1() const { return design_width(w_covariates); }
    [[nodiscard]] int n2() const {
        return m_covariates.empty() ? 0 : design_width(m_covariates);
    }

    /// Throws ValidationError on inconsistent orders/recipes/fixed entries.
    /// series_length, when positive, also checks order bounds against N.
    void validate(int series_length = -1) const;

    /// Zero-valued parameters with the right dimensions; fixed values applied.
    [[nodiscard]] ParameterSet zero_parameters() const;

    /// Overwrites the pinned coefficients in `params` with their fixed values.
    void apply_fixed(ParameterSet& params) const;
};

/// Index bookkeeping for the flattened parameter vector
/// (beta, phi, theta, delta, alpha, gamma, k).
struct ParameterLayout {
    int n1 = 0, p1 = 0, q1 = 0, n2 = 0, p2 = 0, q2 = 0;

    static ParameterLayout from_spec(const ModelSpec& spec);
    static ParameterLayout from_params(const ParameterSet& params);

    [[nodiscard]] int total() const { return n1 + p1 + q1 + n2 + p2 + q2 + 1; }
    [[nodiscard]] int beta_begin() const { return 0; }
    [[nodiscard]] int phi_begin() const { return n1; }
    [[nodiscard]] int theta_begin() const { return n1 + p1; }
    [[nodiscard]] int delta_begin() const { return n1 + p1 + q1; }
    [[nodiscard]] int alpha_begin() const { return n1 + p1 + q1 + n2; }
    [[nodiscard]] int gamma_begin() const { return n1 + p1 + q1 + n2 + p2; }
    [[nodiscard]] int k_index() const { return total() - 1; }

    [[nodiscard]] ParameterSet unflatten(const Eigen::VectorXd& v) const;

    /// Flat indices that remain free under the spec's fixed-coefficient list.
    [[nodiscard]] std::vector<int> free_indices(const std::vector<FixedCoefficient>& fixed) const;

    /// Human-readable names, ordered like the flattened vector. Covariate
    /// labels come from the spec's recipes; ARMA slots are AR1.., MA1..
    [[nodiscard]] std::vector<std::string> parameter_names(const ModelSpec& spec) const;
};

}  // namespace zinb
