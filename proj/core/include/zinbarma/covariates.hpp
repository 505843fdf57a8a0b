#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zinbarma/dataset.hpp"

namespace zinb {

enum class CovariateKind {
    Intercept,        // constant 1
    LinearTrend,      // t'/(N-1) with t' = t-1, or t/denominator when one is given
    Harmonic,         // pair cos(2*pi*t'/period), sin(2*pi*t'/period)
    External,         // named dataset column
    LaggedIndicator,  // I{y_{t-lag} > 0}, zero for t <= lag
};

/// One regressor recipe for a linear predictor.
struct CovariateRecipe {
    CovariateKind kind = CovariateKind::Intercept;
    double period = 0.0;                   // Harmonic
    std::string column;                    // External
    int lag = 0;                           // LaggedIndicator
    std::optional<double> denominator;     // LinearTrend: use t/denominator instead

    static CovariateRecipe intercept();
    static CovariateRecipe linear_trend();
    static CovariateRecipe linear_trend_scaled(double denominator);
    static CovariateRecipe harmonic(double period);
    static CovariateRecipe external(std::string column);
    static CovariateRecipe lagged_indicator(int lag);

    /// Number of design columns this recipe produces (2 for Harmonic, else 1).
    [[nodiscard]] int width() const;

    /// True when the regressor values depend only on (t, N), so a design can
    /// be built without observed data (needed for simulation).
    [[nodiscard]] bool data_free() const;

    [[nodiscard]] std::vector<std::string> labels() const;

    bool operator==(const CovariateRecipe&) const = default;
};

[[nodiscard]] int design_width(const std::vector<CovariateRecipe>& recipes);

[[nodiscard]] std::vector<std::string> design_labels(const std::vector<CovariateRecipe>& recipes);

/// Builds the N x width design matrix for one linear predictor. Row t holds
/// the regressors at time t (1-based), using t' = t-1 for trend/harmonic
/// terms. Throws ValidationError for empty recipe lists, unknown columns,
/// non-positive harmonic periods, or lags >= N.
Eigen::MatrixXd build_design(const std::vector<CovariateRecipe>& recipes, const Dataset& data);

}  // namespace zinb
