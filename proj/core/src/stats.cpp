#include "zinbarma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "zinbarma/errors.hpp"

namespace zinb::stats {

double digamma(double x) {
    return boost::math::digamma(x);
}

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double log_sum_exp(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double normal_cdf(double z) {
    static const boost::math::normal_distribution<double> norm;
    return boost::math::cdf(norm, z);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("normal_quantile: p must lie strictly in (0,1)");
    }
    static const boost::math::normal_distribution<double> norm;
    return boost::math::quantile(norm, p);
}

double chi_squared_sf(double x, double df) {
    if (df <= 0.0) throw ValidationError("chi_squared_sf: df must be positive");
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared_distribution<double> chi(df);
    return boost::math::cdf(boost::math::complement(chi, x));
}

namespace {

// Asymptotic Kolmogorov tail, with the small-sample correction factor of
// Stephens: p = Q_KS((sqrt(n) + 0.12 + 0.11/sqrt(n)) * D).
double kolmogorov_tail(double x) {
    if (x < 1e-8) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_against_cdf(const Eigen::VectorXd& sample, double (*cdf)(double)) {
    const auto n = sample.size();
    if (n < 2) throw ValidationError("ks test: need at least 2 observations");
    std::vector<double> x(sample.data(), sample.data() + n);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double f = cdf(x[static_cast<std::size_t>(i)]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max({d, std::abs(f - lo), std::abs(f - hi)});
    }
    const double sn = std::sqrt(static_cast<double>(n));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

double uniform_cdf(double u) { return std::clamp(u, 0.0, 1.0); }

}  // namespace

KsResult ks_test_standard_normal(const Eigen::VectorXd& sample) {
    return ks_against_cdf(sample, &normal_cdf);
}

KsResult ks_test_uniform(const Eigen::VectorXd& sample) {
    return ks_against_cdf(sample, &uniform_cdf);
}

double mean(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw ValidationError("mean of empty vector");
    return v.mean();
}

double sample_variance(const Eigen::VectorXd& v) {
    if (v.size() < 2) throw ValidationError("sample_variance: need at least 2 values");
    const double m = v.mean();
    return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace zinb::stats
