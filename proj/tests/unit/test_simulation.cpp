#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "zinbarma/distribution.hpp"
#include "zinbarma/errors.hpp"
#include "zinbarma/simulation.hpp"
#include "zinbarma/stats.hpp"

using namespace zinb;
using namespace zinb::testing;

TEST_SUITE("simulate_series") {
    TEST_CASE("same seed reproduces the series bit for bit") {
        const auto spec = model2_spec();
        const auto truth = model2_truth();
        const auto d = designs_for(spec, 200);
        const auto a = simulate_series(truth, d.X, d.U, 987);
        const auto b = simulate_series(truth, d.X, d.U, 987);
        CHECK(a == b);
        const auto c = simulate_series(truth, d.X, d.U, 988);
        CHECK(a != c);
    }

    TEST_CASE("pi forced to one yields an all-zero series") {
        ModelSpec spec = static_spec();
        ParameterSet p = static_truth(2.0, 0.3, 2.0);
        p.delta(0) = 40.0;  // clamped to +30
        const auto d = designs_for(spec, 200);
        const auto y = simulate_series(p, d.X, d.U, 5);
        for (auto v : y) CHECK(v == 0);
    }

    TEST_CASE("static draws reproduce the mixture zero mass and mean") {
        const auto spec = static_spec();
        const auto truth = static_truth(2.0, 0.3, 2.0);
        const int n = 100000;
        const auto d = designs_for(spec, n);
        const auto y = simulate_series(truth, d.X, d.U, 314159);
        double zeros = 0.0, sum = 0.0;
        for (auto v : y) {
            if (v == 0) zeros += 1.0;
            sum += static_cast<double>(v);
        }
        CHECK(zeros / n == doctest::Approx(0.475).epsilon(0.0106));  // +-0.005 absolute
        CHECK(std::abs(zeros / n - 0.475) < 0.005);
        CHECK(std::abs(sum / n - 1.4) < 0.02);
    }

    TEST_CASE("unstable AR coefficients are rejected; strong MA is allowed") {
        ModelSpec spec = static_spec();
        spec.p1 = 1;
        ParameterSet p = static_truth(2.0, 0.3, 2.0);
        p.phi = Eigen::VectorXd::Constant(1, 1.5);
        const auto d = designs_for(spec, 50);
        CHECK_THROWS_AS(simulate_series(p, d.X, d.U, 1), ValidationError);

        const auto spec3 = model3_spec();
        const auto d3 = designs_for(spec3, 100);
        const auto y = simulate_series(model3_truth(), d3.X, d3.U, 2);
        CHECK(y.size() == 100);
    }

    TEST_CASE("simulated zero fraction agrees with the conditional zero masses") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const int n = 100, reps = 200;
        const auto d = designs_for(spec, n);
        Eigen::VectorXd gap(reps);
        for (int r = 0; r < reps; ++r) {
            Dataset data;
            data.y = simulate_series(truth, d.X, d.U, derive_seed(2024, r));
            const auto traj = compute_states(truth, d.X, d.U, data.y);
            double observed = 0.0, expected = 0.0;
            for (int t = 0; t < n; ++t) {
                if (data.y[static_cast<std::size_t>(t)] == 0) observed += 1.0;
                expected += ZinbDistribution(traj.lambda(t), traj.pi(t), truth.k).pmf(0);
            }
            gap(r) = (observed - expected) / n;
        }
        const double mean_gap = gap.mean();
        const double se = std::sqrt(stats::sample_variance(gap) / reps);
        CHECK(std::abs(mean_gap) < 3.0 * se);
    }

    TEST_CASE("realized counts are calibrated to the conditional means") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const int n = 100, reps = 200;
        const auto d = designs_for(spec, n);
        Eigen::VectorXd gap(reps);
        for (int r = 0; r < reps; ++r) {
            Dataset data;
            data.y = simulate_series(truth, d.X, d.U, derive_seed(4048, r));
            const auto traj = compute_states(truth, d.X, d.U, data.y);
            gap(r) = (data.y_as_double() - traj.cond_mean).mean();
        }
        const double se = std::sqrt(stats::sample_variance(gap) / reps);
        CHECK(std::abs(gap.mean()) < 3.0 * se);
    }
}

TEST_SUITE("derive_seed") {
    TEST_CASE("neighboring streams decorrelate") {
        CHECK(derive_seed(1, 0) != derive_seed(1, 1));
        CHECK(derive_seed(1, 0) != derive_seed(2, 0));
        CHECK(derive_seed(0, 0) != 0);
    }
}

TEST_SUITE("run_mc_study") {
    TEST_CASE("small study summarizes estimates against the truth") {
        McStudyConfig cfg;
        cfg.spec = model1_spec();
        cfg.truth = model1_truth();
        cfg.sample_sizes = {60};
        cfg.replications = 12;
        cfg.estimator = StudyEstimator::NewtonRaphson;
        cfg.seed = 99;
        const auto cells = run_mc_study(cfg);
        REQUIRE(cells.size() == 1);
        const auto& cell = cells[0];
        CHECK(cell.attempted == 12);
        CHECK(cell.converged >= 9);
        REQUIRE(cell.parameters.size() == 10);  // 3 beta + 2 theta + 3 delta + 1 gamma + k
        for (const auto& p : cell.parameters) {
            CHECK(std::isfinite(p.mean_estimate));
            CHECK(p.abs_bias == doctest::Approx(std::abs(p.mean_estimate - p.true_value)));
        }
    }

    TEST_CASE("replication count one reports the single fit with absent spread") {
        McStudyConfig cfg;
        cfg.spec = model1_spec();
        cfg.truth = model1_truth();
        cfg.sample_sizes = {80};
        cfg.replications = 1;
        cfg.estimator = StudyEstimator::NewtonRaphson;
        cfg.seed = 7;
        const auto cells = run_mc_study(cfg);
        REQUIRE(cells.size() == 1);
        if (cells[0].converged == 1) {
            for (std::size_t j = 0; j < cells[0].parameters.size(); ++j) {
                const auto& p = cells[0].parameters[j];
                CHECK(p.mean_estimate == cells[0].estimates(0, static_cast<int>(j)));
                CHECK_FALSE(p.se_of_mean.has_value());
                CHECK_FALSE(p.ci_lower.has_value());
            }
        }
    }

    TEST_CASE("determinism across repeated runs") {
        McStudyConfig cfg;
        cfg.spec = model1_spec();
        cfg.truth = model1_truth();
        cfg.sample_sizes = {60};
        cfg.replications = 6;
        cfg.estimator = StudyEstimator::NewtonRaphson;
        cfg.seed = 1234;
        const auto a = run_mc_study(cfg);
        const auto b = run_mc_study(cfg);
        REQUIRE(a.size() == b.size());
        CHECK(a[0].estimates == b[0].estimates);
    }

    TEST_CASE("data-dependent covariates cannot be simulated") {
        McStudyConfig cfg;
        cfg.spec = model1_spec();
        cfg.spec.w_covariates.push_back(CovariateRecipe::external("rain"));
        cfg.truth = model1_truth();
        cfg.truth.beta = Eigen::VectorXd::Zero(4);
        CHECK_THROWS_AS(run_mc_study(cfg), ValidationError);
    }
}

TEST_SUITE("estimator_qq_data") {
    TEST_CASE("standard normal input lines up with the reference quantiles") {
        std::mt19937_64 rng(2718);
        std::normal_distribution<double> norm(0.0, 1.0);
        const int reps = 400;
        Eigen::MatrixXd est(reps, 1);
        Eigen::MatrixXd ses = Eigen::MatrixXd::Ones(reps, 1);
        const Eigen::VectorXd truth = Eigen::VectorXd::Zero(1);
        for (int r = 0; r < reps; ++r) est(r, 0) = norm(rng);
        const auto qq = estimator_qq_data(est, truth, ses);
        REQUIRE(qq.size() == 1);
        Eigen::VectorXd standardized(reps);
        for (int i = 0; i < reps; ++i) standardized(i) = qq[0][static_cast<std::size_t>(i)].sample;
        const auto ks = stats::ks_test_standard_normal(standardized);
        CHECK(ks.p_value > 0.05);
        // QQ points should hug the diagonal in the bulk
        double worst = 0.0;
        for (int i = reps / 10; i < 9 * reps / 10; ++i) {
            worst = std::max(worst, std::abs(qq[0][static_cast<std::size_t>(i)].sample -
                                             qq[0][static_cast<std::size_t>(i)].theoretical));
        }
        CHECK(worst < 0.35);
    }

    TEST_CASE("degenerate inputs are rejected") {
        Eigen::MatrixXd est = Eigen::MatrixXd::Zero(30, 1);
        Eigen::MatrixXd ses = Eigen::MatrixXd::Ones(30, 1);
        const Eigen::VectorXd truth = Eigen::VectorXd::Zero(1);
        CHECK_THROWS_AS(estimator_qq_data(est, truth, ses), ValidationError);  // constant column

        Eigen::MatrixXd est2 = Eigen::MatrixXd::Random(30, 1);
        Eigen::MatrixXd zero_ses = Eigen::MatrixXd::Zero(30, 1);
        CHECK_THROWS_AS(estimator_qq_data(est2, truth, zero_ses), ValidationError);

        Eigen::MatrixXd small = Eigen::MatrixXd::Random(10, 1);
        Eigen::MatrixXd small_ses = Eigen::MatrixXd::Ones(10, 1);
        CHECK_THROWS_AS(estimator_qq_data(small, truth, small_ses), ValidationError);
    }
}
