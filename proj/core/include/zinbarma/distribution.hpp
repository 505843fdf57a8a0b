#pragma once

#include <cstdint>
#include <vector>

namespace zinb {

struct ConditionalMoments {
    double mean = 0.0;      // Lambda = lambda (1 - pi)
    double variance = 0.0;  // Psi = lambda (1 - pi) (1 + lambda pi + lambda / k)
};

/// Conditional mean and variance of the zero-inflated NB mixture.
ConditionalMoments conditional_moments(double lambda, double pi, double k);

/// Zero-inflated negative binomial distribution: with probability pi the
/// outcome is 0; otherwise NB(k, p_tilde) with p_tilde = k/(k+lambda), so
///   P(Y=0) = pi + (1-pi) p_tilde^k,
///   P(Y=m) = (1-pi) Gamma(m+k)/(m! Gamma(k)) (1-p_tilde)^m p_tilde^k,  m>0.
class ZinbDistribution {
public:
    ZinbDistribution(double lambda, double pi, double k);

    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double pi() const { return pi_; }
    [[nodiscard]] double k() const { return k_; }
    [[nodiscard]] double p_tilde() const { return k_ / (k_ + lambda_); }

    [[nodiscard]] double log_pmf(std::int64_t y) const;
    [[nodiscard]] double pmf(std::int64_t y) const;

    /// F(y) = sum_{j<=y} pmf(j); returns 0 for y < 0.
    [[nodiscard]] double cdf(std::int64_t y) const;

    /// (F(y-1), F(y)) in one pass; used by randomized quantile residuals.
    [[nodiscard]] std::pair<double, double> cdf_interval(std::int64_t y) const;

    [[nodiscard]] ConditionalMoments moments() const;

private:
    double lambda_;
    double pi_;
    double k_;
};

}  // namespace zinb
