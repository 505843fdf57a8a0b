#include "zinbarma/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "zinbarma/errors.hpp"
#include "zinbarma/stats.hpp"

namespace zinb {

namespace {

double saturated_term(std::int64_t y, double k) {
    if (y == 0) return 0.0;  // pi = 1 puts all mass on zero
    const auto yd = static_cast<double>(y);
    return std::lgamma(k + yd) - std::lgamma(k) - std::lgamma(yd + 1.0) +
           k * (std::log(k) - std::log(k + yd)) + yd * (std::log(yd) - std::log(k + yd));
}

}  // namespace

GofSummary gof_summary(const FitResult& fit, const Dataset& data) {
    if (!fit.converged) throw ValidationError("gof_summary: fit did not converge");
    if (fit.n_obs != data.n()) throw ValidationError("gof_summary: dataset length mismatch");

    const auto& traj = fit.trajectory;
    const int n = data.n();
    GofSummary g;
    g.loglik = fit.loglik;
    g.n_params = fit.n_params;
    g.n_obs = n;
    g.df = n - fit.n_params;
    g.aic = -2.0 * fit.loglik + 2.0 * fit.n_params;
    g.bic = -2.0 * fit.loglik + fit.n_params * std::log(static_cast<double>(n));

    double sat = 0.0;
    for (int t = 0; t < n; ++t) {
        const double yt = static_cast<double>(data.y[static_cast<std::size_t>(t)]);
        const double resid = yt - traj.cond_mean(t);
        g.mse += resid * resid;
        g.mad += std::abs(resid);
        const double psi = traj.cond_var(t);
        if (psi < kPsiFloor) {
            throw NumericalError("gof_summary: conditional variance underflow at t=" +
                                 std::to_string(t + 1));
        }
        g.pearson_chi2 += resid * resid / psi;
        sat += saturated_term(data.y[static_cast<std::size_t>(t)], fit.params.k);
    }
    g.mse /= static_cast<double>(n);
    g.mad /= static_cast<double>(n);
    g.deviance = 2.0 * (sat - fit.loglik);
    return g;
}

Eigen::VectorXd randomized_quantile_residuals(const FitResult& fit, const Dataset& data,
                                              std::uint64_t seed, bool midpoint) {
    if (!fit.converged) {
        throw ValidationError("randomized_quantile_residuals: fit did not converge");
    }
    if (fit.n_obs != data.n()) {
        throw ValidationError("randomized_quantile_residuals: dataset length mismatch");
    }
    const auto& traj = fit.trajectory;
    const int n = data.n();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::VectorXd r(n);
    for (int t = 0; t < n; ++t) {
        const ZinbDistribution dist(traj.lambda(t), traj.pi(t), fit.params.k);
        const auto [lo, hi] = dist.cdf_interval(data.y[static_cast<std::size_t>(t)]);
        if (hi - lo < 1e-14) {
            throw NumericalError(
                "randomized_quantile_residuals: degenerate CDF interval at t=" +
                std::to_string(t + 1));
        }
        double u = midpoint ? 0.5 * (lo + hi) : hi - unif(rng) * (hi - lo);
        u = std::clamp(u, 1e-15, 1.0 - 1e-15);
        r(t) = stats::normal_quantile(u);
    }
    return r;
}

AcfResult acf_pacf(const Eigen::VectorXd& series, int max_lag) {
    const int n = static_cast<int>(series.size());
    if (max_lag < 1) throw ValidationError("acf_pacf: max_lag must be >= 1");
    if (n <= max_lag + 1) throw ValidationError("acf_pacf: series too short for max_lag");
    const double mean = series.mean();
    const double c0 = (series.array() - mean).square().sum();
    if (!(c0 > 0.0)) throw ValidationError("acf_pacf: constant series");

    AcfResult out;
    out.acf.resize(max_lag + 1);
    out.acf(0) = 1.0;
    for (int h = 1; h <= max_lag; ++h) {
        double ch = 0.0;
        for (int t = 0; t + h < n; ++t) ch += (series(t) - mean) * (series(t + h) - mean);
        out.acf(h) = ch / c0;
    }

    // Durbin-Levinson recursion for partial autocorrelations.
    out.pacf.resize(max_lag);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(max_lag + 1);
    Eigen::VectorXd curr = Eigen::VectorXd::Zero(max_lag + 1);
    prev(1) = out.acf(1);
    out.pacf(0) = out.acf(1);
    for (int m = 2; m <= max_lag; ++m) {
        double num = out.acf(m);
        double den = 1.0;
        for (int j = 1; j < m; ++j) {
            num -= prev(j) * out.acf(m - j);
            den -= prev(j) * out.acf(j);
        }
        const double pm = den != 0.0 ? num / den : 0.0;
        out.pacf(m - 1) = pm;
        for (int j = 1; j < m; ++j) curr(j) = prev(j) - pm * prev(m - j);
        curr(m) = pm;
        prev = curr;
    }
    return out;
}

LjungBoxResult ljung_box_from_acf(const Eigen::VectorXd& acf_tail, int n, int fitted_df) {
    const int lags = static_cast<int>(acf_tail.size());
    if (lags < 1) throw ValidationError("ljung_box: need at least one lag");
    double q = 0.0;
    for (int h = 1; h <= lags; ++h) {
        q += acf_tail(h - 1) * acf_tail(h - 1) / static_cast<double>(n - h);
    }
    q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
    LjungBoxResult r;
    r.statistic = q;
    r.df = std::max(1, lags - fitted_df);
    r.p_value = stats::chi_squared_sf(q, r.df);
    return r;
}

LjungBoxResult ljung_box(const Eigen::VectorXd& residuals, int max_lag, int fitted_df) {
    const AcfResult acf = acf_pacf(residuals, max_lag);
    return ljung_box_from_acf(acf.acf.segment(1, max_lag), static_cast<int>(residuals.size()),
                              fitted_df);
}

double excess_zero_from_aggregates(int zero_count, double nb_zero_mass_sum, int n) {
    if (n <= 0) throw ValidationError("excess_zero_from_aggregates: n must be positive");
    return (static_cast<double>(zero_count) - nb_zero_mass_sum) / static_cast<double>(n);
}

double excess_zero_probability(const FitResult& fit, const Dataset& data) {
    if (!fit.converged) throw ValidationError("excess_zero_probability: fit did not converge");
    if (fit.n_obs != data.n()) {
        throw ValidationError("excess_zero_probability: dataset length mismatch");
    }
    const double k = fit.params.k;
    int zeros = 0;
    double nb_zero_sum = 0.0;
    for (int t = 0; t < data.n(); ++t) {
        if (data.y[static_cast<std::size_t>(t)] != 0) continue;
        ++zeros;
        const double lambda = fit.trajectory.lambda(t);
        nb_zero_sum += std::exp(k * (std::log(k) - std::log(k + lambda)));
    }
    return excess_zero_from_aggregates(zeros, nb_zero_sum, data.n());
}

std::vector<ZeroClassificationRow> zero_classification_table(
    const FitResult& fit, const Dataset& data, const std::vector<double>& thresholds) {
    if (!fit.converged) throw ValidationError("zero_classification_table: fit did not converge");
    if (fit.n_obs != data.n()) {
        throw ValidationError("zero_classification_table: dataset length mismatch");
    }
    for (double th : thresholds) {
        if (!(th > 0.0)) throw ValidationError("zero_classification_table: thresholds must be > 0");
    }

    std::vector<ZeroClassificationRow> rows;
    for (double th : thresholds) {
        int zeros = 0, zeros_hit = 0, positives = 0, positives_hit = 0;
        for (int t = 0; t < data.n(); ++t) {
            const bool predicted_zero = fit.trajectory.cond_mean(t) < th;
            if (data.y[static_cast<std::size_t>(t)] == 0) {
                ++zeros;
                if (predicted_zero) ++zeros_hit;
            } else {
                ++positives;
                if (!predicted_zero) ++positives_hit;
            }
        }
        ZeroClassificationRow row;
        row.threshold = th;
        if (zeros > 0) row.sensitivity = static_cast<double>(zeros_hit) / zeros;
        if (positives > 0) row.specificity = static_cast<double>(positives_hit) / positives;
        rows.push_back(row);
    }
    return rows;
}

ForecastResult one_step_forecast(const FitResult& fit, const Eigen::VectorXd& x_next,
                                 const Eigen::VectorXd& u_next) {
    if (!fit.converged) throw ValidationError("one_step_forecast: fit did not converge");
    const auto& p = fit.params;
    const auto& traj = fit.trajectory;
    if (x_next.size() != p.beta.size()) {
        throw ValidationError("one_step_forecast: x covariate width mismatch");
    }
    if (u_next.size() != p.delta.size()) {
        throw ValidationError("one_step_forecast: u covariate width mismatch");
    }
    const int n = traj.n();
    if (n == 0) throw ValidationError("one_step_forecast: empty trajectory");

    double z_next = 0.0;
    for (int i = 1; i <= static_cast<int>(p.phi.size()); ++i) {
        const int t = n - i;
        if (t >= 0) z_next += p.phi(i - 1) * (traj.z(t) + traj.e(t));
    }
    for (int j = 1; j <= static_cast<int>(p.theta.size()); ++j) {
        const int t = n - j;
        if (t >= 0) z_next += p.theta(j - 1) * traj.e(t);
    }
    double v_next = 0.0;
    for (int i = 1; i <= static_cast<int>(p.alpha.size()); ++i) {
        const int t = n - i;
        if (t >= 0) v_next += p.alpha(i - 1) * (traj.v(t) + traj.e(t));
    }
    for (int j = 1; j <= static_cast<int>(p.gamma.size()); ++j) {
        const int t = n - j;
        if (t >= 0) v_next += p.gamma(j - 1) * traj.e(t);
    }

    const double w = std::clamp(x_next.dot(p.beta) + z_next, -kPredictorClamp, kPredictorClamp);
    const double lambda = std::exp(w);
    double pi = 0.0;
    if (traj.zero_inflation) {
        const double m = std::clamp(u_next.dot(p.delta) + v_next, -kPredictorClamp,
                                    kPredictorClamp);
        pi = 1.0 / (1.0 + std::exp(-m));
    }
    ForecastResult out{lambda, pi, lambda * (1.0 - pi), ZinbDistribution(lambda, pi, p.k)};
    return out;
}

}  // namespace zinb
