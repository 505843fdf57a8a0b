#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/covariates.hpp"
#include "zinbarma/dataset.hpp"
#include "zinbarma/likelihood.hpp"
#include "zinbarma/model.hpp"
#include "zinbarma/simulation.hpp"

namespace zinb::testing {

/// Pure-MA benchmark model: W on [1, cos, sin] (period 6) with MA(2),
/// M on the same covariates with MA(1).
inline ModelSpec model1_spec() {
    ModelSpec spec;
    spec.q1 = 2;
    spec.q2 = 1;
    spec.w_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(6)};
    spec.m_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(6)};
    return spec;
}

inline ParameterSet model1_truth() {
    ParameterSet p;
    p.beta = Eigen::Vector3d(0.5, 0.2, -0.3);
    p.phi = Eigen::VectorXd(0);
    p.theta = Eigen::Vector2d(0.4, 0.25);
    p.delta = Eigen::Vector3d(-0.5, 0.3, -0.2);
    p.alpha = Eigen::VectorXd(0);
    p.gamma = Eigen::VectorXd::Constant(1, 0.3);
    p.k = 2.0;
    return p;
}

/// Mixed ARMA benchmark model: AR(1)+MA(2) on W, AR(1)+MA(1) on M.
inline ModelSpec model2_spec() {
    ModelSpec spec;
    spec.p1 = 1;
    spec.q1 = 2;
    spec.p2 = 1;
    spec.q2 = 1;
    spec.w_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(6)};
    spec.m_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(6)};
    return spec;
}

inline ParameterSet model2_truth() {
    ParameterSet p;
    p.beta = Eigen::Vector3d(0.5, 0.2, -0.3);
    p.phi = Eigen::VectorXd::Constant(1, 0.3);
    p.theta = Eigen::Vector2d(0.35, 0.2);
    p.delta = Eigen::Vector3d(-0.5, 0.3, -0.2);
    p.alpha = Eigen::VectorXd::Constant(1, 0.25);
    p.gamma = Eigen::VectorXd::Constant(1, 0.3);
    p.k = 2.0;
    return p;
}

/// Weekly-seasonal pure-MA model with trend and a pinned middle MA slot:
/// W on [1, trend, cos52, sin52] with MA slots (theta1, 0, theta3), static M.
inline ModelSpec model3_spec() {
    ModelSpec spec;
    spec.q1 = 3;
    spec.w_covariates = {CovariateRecipe::intercept(), CovariateRecipe::linear_trend(),
                         CovariateRecipe::harmonic(52)};
    spec.m_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(52)};
    spec.fixed = {{CoefFamily::Theta, 2, 0.0}};
    return spec;
}

inline ParameterSet model3_truth() {
    ParameterSet p;
    p.beta = Eigen::Vector4d(0.3, 0.0001, 0.2, -0.4);
    p.phi = Eigen::VectorXd(0);
    p.theta = Eigen::Vector3d(-3.0, 0.0, -2.0);
    p.delta = Eigen::Vector3d(0.1, -0.4, -0.5);
    p.alpha = Eigen::VectorXd(0);
    p.gamma = Eigen::VectorXd(0);
    p.k = 2.0;
    return p;
}

/// Static zero-inflated model (no ARMA terms) with intercept-only designs at
/// fixed lambda/pi/k.
inline ModelSpec static_spec() {
    ModelSpec spec;
    spec.w_covariates = {CovariateRecipe::intercept()};
    spec.m_covariates = {CovariateRecipe::intercept()};
    return spec;
}

inline ParameterSet static_truth(double lambda, double pi, double k) {
    ParameterSet p;
    p.beta = Eigen::VectorXd::Constant(1, std::log(lambda));
    p.phi = Eigen::VectorXd(0);
    p.theta = Eigen::VectorXd(0);
    p.delta = Eigen::VectorXd::Constant(1, std::log(pi / (1.0 - pi)));
    p.alpha = Eigen::VectorXd(0);
    p.gamma = Eigen::VectorXd(0);
    p.k = k;
    return p;
}

struct DesignPair {
    Eigen::MatrixXd X;
    Eigen::MatrixXd U;
};

inline DesignPair designs_for(const ModelSpec& spec, int n) {
    Dataset shell;
    shell.y.assign(static_cast<std::size_t>(n), 0);
    DesignPair d;
    d.X = build_design(spec.w_covariates, shell);
    d.U = spec.zero_inflated ? build_design(spec.m_covariates, shell)
                             : Eigen::MatrixXd::Zero(n, 0);
    return d;
}

inline Dataset simulate_dataset(const ModelSpec& spec, const ParameterSet& truth, int n,
                                std::uint64_t seed) {
    const DesignPair d = designs_for(spec, n);
    Dataset data;
    data.y = simulate_series(truth, d.X, d.U, seed);
    return data;
}

/// Central finite differences of the partial log-likelihood; the independent
/// oracle for the analytic score.
inline Eigen::VectorXd fd_score(const ParameterSet& params, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y) {
    const auto layout = ParameterLayout::from_params(params);
    const Eigen::VectorXd center = params.flatten();
    Eigen::VectorXd grad(layout.total());
    for (int i = 0; i < layout.total(); ++i) {
        double h = 1e-5 * std::max(1.0, std::abs(center(i)));
        if (i == layout.k_index()) h = std::min(h, 0.4 * params.k);
        Eigen::VectorXd up = center, dn = center;
        up(i) += h;
        dn(i) -= h;
        grad(i) = (partial_loglik(layout.unflatten(up), X, U, y) -
                   partial_loglik(layout.unflatten(dn), X, U, y)) /
                  (2.0 * h);
    }
    return grad;
}

inline double max_rel_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want,
                            double ignore_below = 1e-8) {
    double worst = 0.0;
    for (int i = 0; i < got.size(); ++i) {
        const double scale = std::max(std::abs(got(i)), std::abs(want(i)));
        if (scale <= ignore_below) continue;
        worst = std::max(worst, std::abs(got(i) - want(i)) / scale);
    }
    return worst;
}

}  // namespace zinb::testing
