#include "zinbarma/covariates.hpp"

#include <cmath>
#include <numbers>

#include "zinbarma/errors.hpp"

namespace zinb {

CovariateRecipe CovariateRecipe::intercept() { return {}; }

CovariateRecipe CovariateRecipe::linear_trend() {
    CovariateRecipe r;
    r.kind = CovariateKind::LinearTrend;
    return r;
}

CovariateRecipe CovariateRecipe::linear_trend_scaled(double denominator) {
    CovariateRecipe r;
    r.kind = CovariateKind::LinearTrend;
    r.denominator = denominator;
    return r;
}

CovariateRecipe CovariateRecipe::harmonic(double period) {
    CovariateRecipe r;
    r.kind = CovariateKind::Harmonic;
    r.period = period;
    return r;
}

CovariateRecipe CovariateRecipe::external(std::string column) {
    CovariateRecipe r;
    r.kind = CovariateKind::External;
    r.column = std::move(column);
    return r;
}

CovariateRecipe CovariateRecipe::lagged_indicator(int lag) {
    CovariateRecipe r;
    r.kind = CovariateKind::LaggedIndicator;
    r.lag = lag;
    return r;
}

int CovariateRecipe::width() const {
    return kind == CovariateKind::Harmonic ? 2 : 1;
}

bool CovariateRecipe::data_free() const {
    return kind == CovariateKind::Intercept || kind == CovariateKind::LinearTrend ||
           kind == CovariateKind::Harmonic;
}

std::vector<std::string> CovariateRecipe::labels() const {
    switch (kind) {
        case CovariateKind::Intercept:
            return {"Intercept"};
        case CovariateKind::LinearTrend:
            if (denominator) return {"t/" + std::to_string(static_cast<long long>(*denominator))};
            return {"trend"};
        case CovariateKind::Harmonic: {
            const auto p = std::to_string(static_cast<long long>(period));
            return {"cos(2pi t/" + p + ")", "sin(2pi t/" + p + ")"};
        }
        case CovariateKind::External:
            return {column};
        case CovariateKind::LaggedIndicator:
            return {"I(y[t-" + std::to_string(lag) + "]>0)"};
    }
    return {"?"};
}

int design_width(const std::vector<CovariateRecipe>& recipes) {
    int w = 0;
    for (const auto& r : recipes) w += r.width();
    return w;
}

std::vector<std::string> design_labels(const std::vector<CovariateRecipe>& recipes) {
    std::vector<std::string> out;
    for (const auto& r : recipes) {
        auto l = r.labels();
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

Eigen::MatrixXd build_design(const std::vector<CovariateRecipe>& recipes, const Dataset& data) {
    if (recipes.empty()) throw ValidationError("build_design: empty covariate recipe list");
    const int n = data.n();
    if (n <= 0) throw ValidationError("build_design: empty dataset");

    Eigen::MatrixXd design(n, design_width(recipes));
    int col = 0;
    for (const auto& r : recipes) {
        switch (r.kind) {
            case CovariateKind::Intercept:
                design.col(col++).setOnes();
                break;
            case CovariateKind::LinearTrend:
                if (r.denominator) {
                    if (*r.denominator <= 0.0)
                        throw ValidationError("build_design: trend denominator must be positive");
                    for (int t = 0; t < n; ++t)
                        design(t, col) = static_cast<double>(t + 1) / *r.denominator;
                } else {
                    // t'/(N-1) with t' = t-1 keeps the regressor in [0,1].
                    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
                    for (int t = 0; t < n; ++t) design(t, col) = static_cast<double>(t) / denom;
                }
                ++col;
                break;
            case CovariateKind::Harmonic: {
                if (r.period <= 0.0)
                    throw ValidationError("build_design: harmonic period must be positive");
                const double omega = 2.0 * std::numbers::pi / r.period;
                for (int t = 0; t < n; ++t) {
                    design(t, col) = std::cos(omega * t);
                    design(t, col + 1) = std::sin(omega * t);
                }
                col += 2;
                break;
            }
            case CovariateKind::External: {
                auto it = data.covariates.find(r.column);
                if (it == data.covariates.end())
                    throw ValidationError("build_design: unknown covariate column '" + r.column +
                                          "'");
                if (it->second.size() != n)
                    throw ValidationError("build_design: column '" + r.column +
                                          "' length does not match series length");
                design.col(col++) = it->second;
                break;
            }
            case CovariateKind::LaggedIndicator: {
                if (r.lag <= 0)
                    throw ValidationError("build_design: lagged-indicator lag must be >= 1");
                if (r.lag >= n)
                    throw ValidationError("build_design: lagged-indicator lag must be < N");
                for (int t = 0; t < n; ++t) {
                    const int src = t - r.lag;
                    design(t, col) = (src >= 0 && data.y[static_cast<std::size_t>(src)] > 0)
                                         ? 1.0
                                         : 0.0;
                }
                ++col;
                break;
            }
        }
    }
    return design;
}

}  // namespace zinb
