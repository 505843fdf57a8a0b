#include "zinbarma/distribution.hpp"

#include <cmath>
#include <limits>

#include "zinbarma/errors.hpp"
#include "zinbarma/stats.hpp"

namespace zinb {

ConditionalMoments conditional_moments(double lambda, double pi, double k) {
    if (!std::isfinite(lambda) || !std::isfinite(pi) || !std::isfinite(k)) {
        throw ValidationError("conditional_moments: non-finite input");
    }
    if (!(lambda > 0.0) || pi < 0.0 || pi > 1.0 || !(k > 0.0)) {
        throw ValidationError("conditional_moments: require lambda>0, pi in [0,1], k>0");
    }
    ConditionalMoments m;
    m.mean = lambda * (1.0 - pi);
    m.variance = m.mean * (1.0 + lambda * pi + lambda / k);
    return m;
}

ZinbDistribution::ZinbDistribution(double lambda, double pi, double k)
    : lambda_(lambda), pi_(pi), k_(k) {
    if (!std::isfinite(lambda) || !std::isfinite(pi) || !std::isfinite(k)) {
        throw ValidationError("ZinbDistribution: non-finite parameter");
    }
    if (!(lambda > 0.0) || pi < 0.0 || pi > 1.0 || !(k > 0.0)) {
        throw ValidationError("ZinbDistribution: require lambda>0, pi in [0,1], k>0");
    }
}

double ZinbDistribution::log_pmf(std::int64_t y) const {
    if (y < 0) return -std::numeric_limits<double>::infinity();
    const double log_pt = std::log(k_) - std::log(k_ + lambda_);
    const double log_1mpt = std::log(lambda_) - std::log(k_ + lambda_);
    const double log_pi = pi_ > 0.0 ? std::log(pi_) : -std::numeric_limits<double>::infinity();
    const double log_1mpi =
        pi_ < 1.0 ? std::log1p(-pi_) : -std::numeric_limits<double>::infinity();
    if (y == 0) {
        return stats::log_sum_exp(log_pi, log_1mpi + k_ * log_pt);
    }
    const auto yd = static_cast<double>(y);
    return log_1mpi + std::lgamma(yd + k_) - std::lgamma(k_) - std::lgamma(yd + 1.0) +
           k_ * log_pt + yd * log_1mpt;
}

double ZinbDistribution::pmf(std::int64_t y) const { return std::exp(log_pmf(y)); }

double ZinbDistribution::cdf(std::int64_t y) const { return cdf_interval(y).second; }

std::pair<double, double> ZinbDistribution::cdf_interval(std::int64_t y) const {
    if (y < 0) return {0.0, 0.0};
    // NB mass accumulated through the stable ratio recurrence
    //   nb(m+1) = nb(m) (m+k)/(m+1) (1-p_tilde).
    const double one_m_pt = lambda_ / (k_ + lambda_);
    double nb_mass = std::exp(k_ * (std::log(k_) - std::log(k_ + lambda_)));  // nb(0)
    double cum_nb = 0.0;
    double below = 0.0;  // F(y-1), NB part
    for (std::int64_t m = 0; m <= y; ++m) {
        if (m == y) below = cum_nb;
        cum_nb += nb_mass;
        nb_mass *= (static_cast<double>(m) + k_) / (static_cast<double>(m) + 1.0) * one_m_pt;
    }
    const double lo = (y == 0) ? 0.0 : pi_ + (1.0 - pi_) * below;
    const double hi = std::min(1.0, pi_ + (1.0 - pi_) * cum_nb);
    return {lo, hi};
}

ConditionalMoments ZinbDistribution::moments() const {
    return conditional_moments(lambda_, pi_, k_);
}

}  // namespace zinb
