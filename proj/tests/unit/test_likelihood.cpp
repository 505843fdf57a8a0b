#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "test_helpers.hpp"
#include "zinbarma/errors.hpp"
#include "zinbarma/estimation.hpp"
#include "zinbarma/likelihood.hpp"
#include "zinbarma/stats.hpp"

using namespace zinb;
using namespace zinb::testing;

TEST_SUITE("partial_loglik") {
    TEST_CASE("single zero observation with pi forced to 1 contributes ~log(1)") {
        ModelSpec spec = static_spec();
        ParameterSet p = static_truth(2.0, 0.3, 2.0);
        p.delta(0) = 40.0;  // clamps to 30; pi = 1 - 9.4e-14
        const auto d = designs_for(spec, 1);
        CHECK(std::abs(partial_loglik(p, d.X, d.U, {0})) < 1e-9);
    }

    TEST_CASE("hand values at lambda=2, k=2, pi=0.3") {
        const ParameterSet p = static_truth(2.0, 0.3, 2.0);
        const auto d = designs_for(static_spec(), 1);
        CHECK(partial_loglik(p, d.X, d.U, {0}) ==
              doctest::Approx(std::log(0.475)).epsilon(1e-12));
        CHECK(partial_loglik(p, d.X, d.U, {1}) ==
              doctest::Approx(std::log(0.175)).epsilon(1e-12));
    }

    TEST_CASE("sums the per-observation contributions") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const auto data = simulate_dataset(spec, truth, 60, 11);
        const auto d = designs_for(spec, 60);
        const auto terms = per_observation_loglik(truth, d.X, d.U, data.y);
        CHECK(terms.sum() == doctest::Approx(partial_loglik(truth, d.X, d.U, data.y)));
    }

    TEST_CASE("invariant under recipe reordering with matching coefficients") {
        ModelSpec a = static_spec();
        a.w_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(12)};
        ModelSpec b = a;
        b.w_covariates = {CovariateRecipe::harmonic(12), CovariateRecipe::intercept()};

        ParameterSet pa = static_truth(2.0, 0.3, 2.0);
        pa.beta = Eigen::Vector3d(0.7, 0.2, -0.1);
        ParameterSet pb = pa;
        pb.beta = Eigen::Vector3d(0.2, -0.1, 0.7);  // permuted to match the reordering

        Dataset shell;
        shell.y.assign(48, 1);
        for (int t = 0; t < 48; ++t) shell.y[static_cast<std::size_t>(t)] = (t * 7) % 5;
        const auto Xa = build_design(a.w_covariates, shell);
        const auto Xb = build_design(b.w_covariates, shell);
        const auto U = build_design(a.m_covariates, shell);
        CHECK(partial_loglik(pa, Xa, U, shell.y) ==
              doctest::Approx(partial_loglik(pb, Xb, U, shell.y)).epsilon(1e-14));
    }
}

TEST_SUITE("score") {
    TEST_CASE("static model matches finite differences") {
        const auto spec = static_spec();
        const auto truth = static_truth(2.5, 0.35, 1.8);
        const auto data = simulate_dataset(spec, truth, 50, 21);
        const auto d = designs_for(spec, 50);
        ParameterSet at = static_truth(2.0, 0.3, 2.2);  // off-truth evaluation point
        const auto analytic = score(at, d.X, d.U, data.y);
        const auto numeric = fd_score(at, d.X, d.U, data.y);
        CHECK(max_rel_error(analytic, numeric) < 1e-6);
    }

    TEST_CASE("full ARMA model matches finite differences") {
        const auto spec = model2_spec();
        const auto truth = model2_truth();
        const auto data = simulate_dataset(spec, truth, 50, 22);
        const auto d = designs_for(spec, 50);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        ParameterSet at = truth;
        for (auto* vec : {&at.beta, &at.phi, &at.theta, &at.delta, &at.alpha, &at.gamma}) {
            for (int i = 0; i < vec->size(); ++i) (*vec)(i) += jitter(rng);
        }
        at.k = 2.3;
        const auto analytic = score(at, d.X, d.U, data.y);
        const auto numeric = fd_score(at, d.X, d.U, data.y);
        CHECK(max_rel_error(analytic, numeric) < 1e-6);
    }

    TEST_CASE("ten random ARMA configurations match finite differences") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> coef(-0.35, 0.35);
        std::uniform_real_distribution<double> reg(-0.5, 0.5);
        std::uniform_int_distribution<int> order(0, 2);
        std::uniform_real_distribution<double> kdist(0.8, 4.0);
        int done = 0;
        while (done < 10) {
            ModelSpec spec;
            spec.p1 = order(rng);
            spec.q1 = order(rng);
            spec.p2 = order(rng);
            spec.q2 = order(rng);
            spec.w_covariates = {CovariateRecipe::intercept(), CovariateRecipe::harmonic(12)};
            spec.m_covariates = {CovariateRecipe::intercept(), CovariateRecipe::linear_trend()};
            ParameterSet p = spec.zero_parameters();
            p.beta = Eigen::Vector3d(0.4 + reg(rng), reg(rng), reg(rng));
            p.delta = Eigen::Vector2d(-0.4 + reg(rng), reg(rng));
            for (auto* vec : {&p.phi, &p.theta, &p.alpha, &p.gamma}) {
                for (int i = 0; i < vec->size(); ++i) (*vec)(i) = coef(rng);
            }
            p.k = kdist(rng);
            const auto d = designs_for(spec, 50);
            Dataset data;
            data.y = simulate_series(p, d.X, d.U, derive_seed(4242, done));
            const auto traj = compute_states(p, d.X, d.U, data.y);
            if (traj.clamp_events > 0 || traj.psi_floor_events > 0) continue;  // keep smooth
            const auto analytic = score(p, d.X, d.U, data.y);
            const auto numeric = fd_score(p, d.X, d.U, data.y);
            CHECK(max_rel_error(analytic, numeric) < 1e-6);
            ++done;
        }
    }

    TEST_CASE("replicate-averaged score vanishes at the true parameters") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const int n = 100, reps = 500;
        const auto d = designs_for(spec, n);
        const int P = truth.total_size();
        Eigen::MatrixXd scores(reps, P);
        for (int r = 0; r < reps; ++r) {
            Dataset data;
            data.y = simulate_series(truth, d.X, d.U, derive_seed(31337, r));
            scores.row(r) = score(truth, d.X, d.U, data.y).transpose() / n;
        }
        for (int j = 0; j < P; ++j) {
            const double mean = scores.col(j).mean();
            const double se =
                std::sqrt(stats::sample_variance(scores.col(j)) / static_cast<double>(reps));
            CHECK(std::abs(mean) <= 4.0 * se);
        }
    }
}

TEST_SUITE("observed_information") {
    TEST_CASE("exactly symmetric") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const auto data = simulate_dataset(spec, truth, 80, 5);
        const auto d = designs_for(spec, 80);
        const auto H = observed_information(truth, d.X, d.U, data.y);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("agrees with a second-order finite-difference Hessian") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const auto data = simulate_dataset(spec, truth, 60, 6);
        const auto d = designs_for(spec, 60);
        const auto H = observed_information(truth, d.X, d.U, data.y);

        // independent oracle: finite differences of finite-difference gradients
        const auto layout = ParameterLayout::from_params(truth);
        const int P = layout.total();
        Eigen::MatrixXd H2(P, P);
        const Eigen::VectorXd center = truth.flatten();
        for (int i = 0; i < P; ++i) {
            const double h = 2e-4 * std::max(1.0, std::abs(center(i)));
            Eigen::VectorXd up = center, dn = center;
            up(i) += h;
            dn(i) -= h;
            H2.col(i) = -(fd_score(layout.unflatten(up), d.X, d.U, data.y) -
                          fd_score(layout.unflatten(dn), d.X, d.U, data.y)) /
                        (2.0 * h);
        }
        H2 = 0.5 * (H2 + H2.transpose());
        CHECK((H - H2).norm() / H2.norm() < 1e-4);
    }

    TEST_CASE("positive definite at a converged optimum") {
        ModelSpec spec = static_spec();
        spec.q1 = 1;
        ParameterSet truth = static_truth(3.0, 0.3, 2.0);
        truth.theta = Eigen::VectorXd::Constant(1, 0.3);
        const auto data = simulate_dataset(spec, truth, 500, 77);
        const auto fit = fit_newton_raphson(data, spec, initialize(data, spec));
        REQUIRE(fit.converged);
        const auto d = designs_for(spec, 500);
        const auto H = observed_information(fit.params, d.X, d.U, data.y);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(H);
        CHECK(eigen.eigenvalues().minCoeff() > 0.0);
    }

    TEST_CASE("likelihood falls away from the optimum along the top curvature direction") {
        ModelSpec spec = static_spec();
        spec.q1 = 1;
        ParameterSet truth = static_truth(3.0, 0.3, 2.0);
        truth.theta = Eigen::VectorXd::Constant(1, 0.3);
        const auto data = simulate_dataset(spec, truth, 400, 78);
        const auto fit = fit_newton_raphson(data, spec, initialize(data, spec));
        REQUIRE(fit.converged);
        const auto d = designs_for(spec, 400);
        const auto H = observed_information(fit.params, d.X, d.U, data.y);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(H);
        const int P = static_cast<int>(H.rows());
        const Eigen::VectorXd top = eigen.eigenvectors().col(P - 1);
        const auto layout = ParameterLayout::from_params(fit.params);
        const Eigen::VectorXd center = fit.params.flatten();
        const double at_opt = partial_loglik(fit.params, d.X, d.U, data.y);
        for (double eps : {1e-3, -1e-3}) {
            Eigen::VectorXd shifted = center + eps * top;
            CHECK(partial_loglik(layout.unflatten(shifted), d.X, d.U, data.y) < at_opt);
        }
    }
}
