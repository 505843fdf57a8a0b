#include "zinbarma/polynomial.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "zinbarma/errors.hpp"

namespace zinb {

RootCheck check_polynomial_roots(const Eigen::VectorXd& coeffs, PolynomialKind kind) {
    if (!coeffs.allFinite()) throw ValidationError("check_polynomial_roots: non-finite coefficient");

    // Polynomial c_0 + c_1 z + ... + c_d z^d with c_0 = 1.
    const double sign = (kind == PolynomialKind::Ar) ? -1.0 : 1.0;
    int degree = static_cast<int>(coeffs.size());
    while (degree > 0 && std::abs(coeffs(degree - 1)) < 1e-14) --degree;

    RootCheck result;
    if (degree == 0) return result;  // no constraint

    // Companion matrix of the monic reversal; its eigenvalues are the roots.
    Eigen::VectorXd poly(degree + 1);
    poly(0) = 1.0;
    for (int i = 1; i <= degree; ++i) poly(i) = sign * coeffs(i - 1);

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -poly(i) / poly(degree);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    for (int i = 0; i < degree; ++i) {
        const double modulus = std::abs(solver.eigenvalues()(i));
        result.min_root_modulus = std::min(result.min_root_modulus, modulus);
    }
    result.ok = result.min_root_modulus > 1.0;
    return result;
}

double ma_infinity_variance(const Eigen::VectorXd& theta, const Eigen::VectorXd& phi) {
    if (phi.size() != 0) {
        throw ValidationError(
            "ma_infinity_variance: closed form implemented for pure MA predictors only");
    }
    if (!theta.allFinite()) throw ValidationError("ma_infinity_variance: non-finite coefficient");
    return theta.squaredNorm();
}

}  // namespace zinb
