#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "zinbarma/covariates.hpp"
#include "zinbarma/distribution.hpp"
#include "zinbarma/errors.hpp"
#include "zinbarma/polynomial.hpp"
#include "zinbarma/states.hpp"
#include "zinbarma/stats.hpp"

using namespace zinb;
using namespace zinb::testing;

namespace {

Dataset counts_only(std::vector<std::int64_t> y) {
    Dataset d;
    d.y = std::move(y);
    return d;
}

}  // namespace

TEST_SUITE("build_design") {
    TEST_CASE("linear trend starts at zero and stays in [0,1]") {
        Dataset d = counts_only(std::vector<std::int64_t>(149, 1));
        const auto X = build_design({CovariateRecipe::linear_trend()}, d);
        CHECK(X(0, 0) == 0.0);
        CHECK(X(148, 0) == 1.0);
        CHECK(X.minCoeff() >= 0.0);
        CHECK(X.maxCoeff() <= 1.0);
    }

    TEST_CASE("harmonic quarter period hits (0, 1)") {
        Dataset d = counts_only(std::vector<std::int64_t>(52, 0));
        const auto X = build_design({CovariateRecipe::harmonic(52)}, d);
        // t' = 13 is row index 13
        CHECK(std::abs(X(13, 0)) < 1e-15);
        CHECK(X(13, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("weekly-seasonal recipe set resolves to four columns") {
        Dataset d = counts_only(std::vector<std::int64_t>(149, 0));
        const auto spec = model3_spec();
        const auto X = build_design(spec.w_covariates, d);
        REQUIRE(X.cols() == 4);
        CHECK(X.col(0).isOnes());
        CHECK(X(1, 1) == doctest::Approx(1.0 / 148.0));
        CHECK(X(0, 2) == 1.0);  // cos(0)
        CHECK(X(0, 3) == 0.0);  // sin(0)
    }

    TEST_CASE("scaled trend uses t/denominator") {
        Dataset d = counts_only(std::vector<std::int64_t>(5, 0));
        const auto X = build_design({CovariateRecipe::linear_trend_scaled(1000)}, d);
        CHECK(X(0, 0) == doctest::Approx(0.001));
        CHECK(X(4, 0) == doctest::Approx(0.005));
    }

    TEST_CASE("lagged indicator marks positive history") {
        Dataset d = counts_only({0, 3, 0, 2, 0});
        const auto X = build_design({CovariateRecipe::lagged_indicator(1)}, d);
        CHECK(X(0, 0) == 0.0);  // no history at t=1
        CHECK(X(1, 0) == 0.0);
        CHECK(X(2, 0) == 1.0);
        CHECK(X(3, 0) == 0.0);
        CHECK(X(4, 0) == 1.0);
    }

    TEST_CASE("errors: unknown column, bad period, empty recipes, bad lag") {
        Dataset d = counts_only(std::vector<std::int64_t>(10, 1));
        CHECK_THROWS_AS(build_design({CovariateRecipe::external("rain")}, d), ValidationError);
        CHECK_THROWS_AS(build_design({CovariateRecipe::harmonic(0.0)}, d), ValidationError);
        CHECK_THROWS_AS(build_design({}, d), ValidationError);
        CHECK_THROWS_AS(build_design({CovariateRecipe::lagged_indicator(10)}, d),
                        ValidationError);
    }
}

TEST_SUITE("conditional_moments") {
    TEST_CASE("degenerate at pi=1") {
        const auto m = conditional_moments(2.0, 1.0, 5.0);
        CHECK(m.mean == 0.0);
        CHECK(m.variance == 0.0);
    }

    TEST_CASE("hand values") {
        const auto a = conditional_moments(2.0, 0.5, 2.0);
        CHECK(a.mean == doctest::Approx(1.0));
        CHECK(a.variance == doctest::Approx(3.0));
        const auto b = conditional_moments(3.0, 0.0, 3.0);
        CHECK(b.mean == doctest::Approx(3.0));
        CHECK(b.variance == doctest::Approx(6.0));
    }

    TEST_CASE("rejects non-finite input") {
        CHECK_THROWS_AS(conditional_moments(std::nan(""), 0.5, 1.0), ValidationError);
    }
}

TEST_SUITE("zinb_distribution") {
    TEST_CASE("pure zero state") {
        const ZinbDistribution d(2.0, 1.0, 2.0);
        CHECK(d.pmf(0) == doctest::Approx(1.0));
        CHECK(d.pmf(3) == doctest::Approx(0.0));
    }

    TEST_CASE("hand pmf values") {
        const ZinbDistribution d(2.0, 0.3, 2.0);
        CHECK(d.p_tilde() == doctest::Approx(0.5));
        CHECK(d.pmf(0) == doctest::Approx(0.475).epsilon(1e-12));
        CHECK(d.pmf(1) == doctest::Approx(0.175).epsilon(1e-12));
    }

    TEST_CASE("cdf accumulates the pmf") {
        const ZinbDistribution d(2.0, 0.3, 2.0);
        CHECK(d.cdf(0) == doctest::Approx(d.pmf(0)).epsilon(1e-14));
        CHECK(d.cdf(1) == doctest::Approx(0.650).epsilon(1e-12));
        CHECK(d.cdf(10000) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.cdf(-1) == 0.0);
    }

    TEST_CASE("cdf is monotone and the interval brackets the mass") {
        const ZinbDistribution d(7.5, 0.2, 0.8);
        double prev = 0.0;
        for (std::int64_t y = 0; y <= 60; ++y) {
            const auto [lo, hi] = d.cdf_interval(y);
            CHECK(lo == doctest::Approx(prev).epsilon(1e-12));
            CHECK(hi >= lo);
            CHECK(hi - lo == doctest::Approx(d.pmf(y)).epsilon(1e-9));
            prev = hi;
        }
    }

    TEST_CASE("normalization and moment identities over the parameter grid") {
        for (double lambda : {0.1, 1.0, 10.0}) {
            for (double pi : {0.0, 0.3, 0.9}) {
                for (double k : {0.5, 2.0, 10.0}) {
                    const ZinbDistribution d(lambda, pi, k);
                    double sum = 0.0, mean = 0.0, second = 0.0;
                    std::int64_t y = 0;
                    // extend the truncation until the remaining tail is negligible
                    while (sum < 1.0 - 1e-13 && y < 200000) {
                        const double p = d.pmf(y);
                        sum += p;
                        mean += static_cast<double>(y) * p;
                        second += static_cast<double>(y) * static_cast<double>(y) * p;
                        ++y;
                    }
                    const auto m = conditional_moments(lambda, pi, k);
                    CHECK(std::abs(sum - 1.0) <= 1e-8);
                    if (m.mean > 0.0) {
                        CHECK(mean == doctest::Approx(m.mean).epsilon(1e-6));
                        const double var = second - mean * mean;
                        CHECK(var == doctest::Approx(m.variance).epsilon(1e-6));
                    }
                }
            }
        }
    }
}

TEST_SUITE("compute_states") {
    TEST_CASE("zero ARMA coefficients collapse to the regression predictors") {
        const auto spec = model1_spec();
        auto params = model1_truth();
        params.theta.setZero();
        params.gamma.setZero();
        const int n = 40;
        const auto d = designs_for(spec, n);
        std::vector<std::int64_t> y(n, 1);
        const auto traj = compute_states(params, d.X, d.U, y);
        for (int t = 0; t < n; ++t) {
            CHECK(traj.w(t) == doctest::Approx(d.X.row(t).dot(params.beta)).epsilon(1e-14));
            CHECK(traj.m(t) == doctest::Approx(d.U.row(t).dot(params.delta)).epsilon(1e-14));
            CHECK(traj.z(t) == 0.0);
            CHECK(traj.v(t) == 0.0);
        }
    }

    TEST_CASE("pure MA(1) recursion matches a hand unrolling for N=3") {
        // independent straight-line unrolling of the first three steps
        ModelSpec spec = static_spec();
        spec.q1 = 1;
        ParameterSet p = static_truth(2.0, 0.3, 2.0);
        p.theta = Eigen::VectorXd::Constant(1, 0.4);
        const auto d = designs_for(spec, 3);
        const std::vector<std::int64_t> y{1, 4, 0};

        const double beta0 = p.beta(0), delta0 = p.delta(0), th = 0.4, k = 2.0;
        const double pi1 = 1.0 / (1.0 + std::exp(-delta0));
        const double lam1 = std::exp(beta0);
        const double mean1 = lam1 * (1.0 - pi1);
        const double var1 = mean1 * (1.0 + lam1 * pi1 + lam1 / k);
        const double e1 = (1.0 - mean1) / std::sqrt(var1);

        const double z2 = th * e1;
        const double lam2 = std::exp(beta0 + z2);
        const double mean2 = lam2 * (1.0 - pi1);
        const double var2 = mean2 * (1.0 + lam2 * pi1 + lam2 / k);
        const double e2 = (4.0 - mean2) / std::sqrt(var2);

        const double z3 = th * e2;
        const double lam3 = std::exp(beta0 + z3);
        const double mean3 = lam3 * (1.0 - pi1);
        const double var3 = mean3 * (1.0 + lam3 * pi1 + lam3 / k);
        const double e3 = (0.0 - mean3) / std::sqrt(var3);

        const auto traj = compute_states(p, d.X, d.U, y);
        CHECK(traj.z(0) == 0.0);
        CHECK(traj.e(0) == doctest::Approx(e1).epsilon(1e-14));
        CHECK(traj.z(1) == doctest::Approx(z2).epsilon(1e-14));
        CHECK(traj.e(1) == doctest::Approx(e2).epsilon(1e-14));
        CHECK(traj.z(2) == doctest::Approx(z3).epsilon(1e-14));
        CHECK(traj.e(2) == doctest::Approx(e3).epsilon(1e-14));
        CHECK(traj.cond_mean(1) == doctest::Approx(mean2).epsilon(1e-14));
        CHECK(traj.cond_var(1) == doctest::Approx(var2).epsilon(1e-14));
    }

    TEST_CASE("observations equal to the conditional mean keep all states at zero") {
        ModelSpec spec = static_spec();
        spec.q1 = 2;
        spec.q2 = 1;
        ParameterSet p = static_truth(4.0, 0.5, 2.0);  // Lambda = 2 exactly
        p.theta = Eigen::Vector2d(0.7, -0.4);
        p.gamma = Eigen::VectorXd::Constant(1, 0.5);
        const int n = 25;
        const auto d = designs_for(spec, n);
        const std::vector<std::int64_t> y(n, 2);
        const auto traj = compute_states(p, d.X, d.U, y);
        for (int t = 0; t < n; ++t) {
            CHECK(std::abs(traj.e(t)) < 1e-13);
            CHECK(std::abs(traj.z(t)) < 1e-13);
            CHECK(std::abs(traj.v(t)) < 1e-13);
        }
    }

    TEST_CASE("extreme predictors clamp and are counted") {
        ModelSpec spec = static_spec();
        ParameterSet p = static_truth(2.0, 0.3, 2.0);
        p.beta(0) = 45.0;
        const auto d = designs_for(spec, 5);
        const std::vector<std::int64_t> y{1, 2, 3, 0, 1};
        const auto traj = compute_states(p, d.X, d.U, y);
        CHECK(traj.clamp_events == 5);
        CHECK(traj.w(0) == 30.0);
    }

    TEST_CASE("variance floor forces e to zero") {
        ModelSpec spec = static_spec();
        ParameterSet p = static_truth(1.0, 0.5, 2.0);
        p.delta(0) = 35.0;  // pi -> 1, conditional variance collapses
        const auto d = designs_for(spec, 4);
        const std::vector<std::int64_t> y{0, 0, 0, 0};
        const auto traj = compute_states(p, d.X, d.U, y);
        CHECK(traj.psi_floor_events == 4);
        for (int t = 0; t < 4; ++t) CHECK(traj.e(t) == 0.0);
    }

    TEST_CASE("standardized errors have mean 0 and variance 1 on a long run") {
        const auto spec = static_spec();
        const auto truth = static_truth(2.0, 0.3, 2.0);
        const int n = 20000;
        const auto data = simulate_dataset(spec, truth, n, 20240811);
        const auto d = designs_for(spec, n);
        const auto traj = compute_states(truth, d.X, d.U, data.y);
        const double mean = traj.e.mean();
        const double var = (traj.e.array() - mean).square().sum() / (n - 1);
        const double bound = 3.0 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean) < bound);
        CHECK(std::abs(var - 1.0) < 5.0 / std::sqrt(static_cast<double>(n)));
    }

    TEST_CASE("pure MA state variance is time independent and matches the closed form") {
        const auto spec = model1_spec();
        const auto truth = model1_truth();
        const double c1 = ma_infinity_variance(truth.theta, truth.phi);
        const int n = 30, reps = 4000;
        const int t1 = 10, t2 = 25;
        const auto d = designs_for(spec, n);
        Eigen::VectorXd w1(reps), w2(reps);
        for (int r = 0; r < reps; ++r) {
            Dataset data;
            data.y = simulate_series(truth, d.X, d.U, derive_seed(555, r));
            const auto traj = compute_states(truth, d.X, d.U, data.y);
            w1(r) = traj.w(t1);
            w2(r) = traj.w(t2);
        }
        const double v1 = stats::sample_variance(w1);
        const double v2 = stats::sample_variance(w2);
        CHECK(std::abs(v1 - v2) / std::max(v1, v2) < 0.05);
        const double mc_err = 4.0 * c1 * std::sqrt(2.0 / reps);
        CHECK(std::abs(v1 - c1) < mc_err);
        CHECK(std::abs(v2 - c1) < mc_err);
    }
}

TEST_SUITE("polynomial_roots") {
    TEST_CASE("single AR coefficient") {
        const auto ok = check_polynomial_roots(Eigen::VectorXd::Constant(1, 0.5),
                                               PolynomialKind::Ar);
        CHECK(ok.ok);
        CHECK(ok.min_root_modulus == doctest::Approx(2.0));
        const auto bad = check_polynomial_roots(Eigen::VectorXd::Constant(1, 1.5),
                                                PolynomialKind::Ar);
        CHECK_FALSE(bad.ok);
        CHECK(bad.min_root_modulus == doctest::Approx(2.0 / 3.0));
    }

    TEST_CASE("empty coefficient vector is vacuously fine") {
        const auto rc = check_polynomial_roots(Eigen::VectorXd(0), PolynomialKind::Ar);
        CHECK(rc.ok);
    }

    TEST_CASE("MA polynomial sign convention") {
        const auto ok = check_polynomial_roots(Eigen::VectorXd::Constant(1, 0.5),
                                               PolynomialKind::Ma);
        CHECK(ok.ok);
        CHECK(ok.min_root_modulus == doctest::Approx(2.0));
        // strong MA coefficients are non-invertible
        const auto rc = check_polynomial_roots(Eigen::Vector3d(-3.0, 0.0, -2.0),
                                               PolynomialKind::Ma);
        CHECK_FALSE(rc.ok);
        CHECK(rc.min_root_modulus < 1.0);
    }

    TEST_CASE("trailing zeros do not raise the degree") {
        Eigen::VectorXd coeffs(3);
        coeffs << 0.5, 0.0, 0.0;
        const auto rc = check_polynomial_roots(coeffs, PolynomialKind::Ar);
        CHECK(rc.ok);
        CHECK(rc.min_root_modulus == doctest::Approx(2.0));
    }

    TEST_CASE("ma_infinity_variance") {
        CHECK(ma_infinity_variance(Eigen::VectorXd(0), Eigen::VectorXd(0)) == 0.0);
        CHECK(ma_infinity_variance(Eigen::Vector3d(-3.0, 0.0, -2.0), Eigen::VectorXd(0)) ==
              doctest::Approx(13.0));
        CHECK(ma_infinity_variance(Eigen::Vector2d(0.5, 0.5), Eigen::VectorXd(0)) ==
              doctest::Approx(0.5));
        CHECK_THROWS_AS(
            ma_infinity_variance(Eigen::VectorXd(0), Eigen::VectorXd::Constant(1, 0.5)),
            ValidationError);
    }
}
