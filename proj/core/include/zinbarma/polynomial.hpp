#pragma once

#include <limits>

#include <Eigen/Dense>

namespace zinb {

enum class PolynomialKind { Ar, Ma };

struct RootCheck {
    bool ok = true;  // all roots strictly outside the unit circle (vacuous when empty)
    double min_root_modulus = std::numeric_limits<double>::infinity();
};

/// Checks the characteristic polynomial of an AR or MA coefficient vector:
/// 1 - sum_i c_i z^i for AR, 1 + sum_i c_i z^i for MA. `ok` requires every
/// root modulus > 1. Trailing (near-)zero coefficients are ignored.
RootCheck check_polynomial_roots(const Eigen::VectorXd& coeffs, PolynomialKind kind);

/// Stationary variance sum_j theta_j^2 of a pure-MA predictor driven by
/// unit-variance errors. Throws ValidationError when an AR part is present.
double ma_infinity_variance(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi);

}  // namespace zinb
