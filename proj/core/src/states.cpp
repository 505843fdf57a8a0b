#include "zinbarma/states.hpp"

#include <cmath>
#include <limits>

#include "zinbarma/errors.hpp"

namespace zinb {

namespace {

void check_dimensions(const ParameterSet& params, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y) {
    if (X.rows() != static_cast<Eigen::Index>(y.size()) ||
        U.rows() != static_cast<Eigen::Index>(y.size())) {
        throw ValidationError("compute_states: design row count does not match series length");
    }
    if (X.cols() != params.beta.size()) {
        throw ValidationError("compute_states: X width does not match beta length");
    }
    if (U.cols() != params.delta.size()) {
        throw ValidationError("compute_states: U width does not match delta length");
    }
}

}  // namespace

StateTrajectory compute_states(const ParameterSet& params, const Eigen::MatrixXd& X,
                               const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                               bool with_gradients) {
    params.validate();
    check_dimensions(params, X, U, y);

    const int n = static_cast<int>(y.size());
    const auto layout = ParameterLayout::from_params(params);
    const int P = layout.total();
    const int p1 = layout.p1, q1 = layout.q1, p2 = layout.p2, q2 = layout.q2;
    const double k = params.k;

    StateTrajectory traj;
    traj.zero_inflation = (layout.n2 + p2 + q2) > 0;
    traj.w.resize(n);
    traj.m.resize(n);
    traj.z.resize(n);
    traj.v.resize(n);
    traj.e.resize(n);
    traj.lambda.resize(n);
    traj.pi.resize(n);
    traj.one_minus_pi.resize(n);
    traj.cond_mean.resize(n);
    traj.cond_var.resize(n);

    Eigen::MatrixXd d_z, d_v;
    if (with_gradients) {
        traj.gradients_stored = true;
        traj.d_w.setZero(n, P);
        traj.d_m.setZero(n, P);
        traj.d_e.setZero(n, P);
        d_z.setZero(n, P);
        d_v.setZero(n, P);
    }

    Eigen::VectorXd dz(P), dv(P), dw(P), dm(P), dlam(P), dpi(P), dmean(P), dc(P), dvar(P), de(P);

    for (int t = 0; t < n; ++t) {
        // ARMA recursions on standardized errors (zero history for t <= 0)
        double zt = 0.0;
        for (int i = 1; i <= p1; ++i) {
            if (t - i >= 0) zt += params.phi(i - 1) * (traj.z(t - i) + traj.e(t - i));
        }
        for (int j = 1; j <= q1; ++j) {
            if (t - j >= 0) zt += params.theta(j - 1) * traj.e(t - j);
        }
        traj.z(t) = zt;

        double vt = 0.0;
        for (int i = 1; i <= p2; ++i) {
            if (t - i >= 0) vt += params.alpha(i - 1) * (traj.v(t - i) + traj.e(t - i));
        }
        for (int j = 1; j <= q2; ++j) {
            if (t - j >= 0) vt += params.gamma(j - 1) * traj.e(t - j);
        }
        traj.v(t) = vt;

        const double w_raw = X.row(t).dot(params.beta) + zt;
        if (!std::isfinite(w_raw)) {
            throw NumericalError("compute_states: non-finite predictor W at t=" +
                                 std::to_string(t + 1));
        }
        const bool w_clamped = std::abs(w_raw) > kPredictorClamp;
        const double wt = std::clamp(w_raw, -kPredictorClamp, kPredictorClamp);
        traj.w(t) = wt;
        const double lambda = std::exp(wt);
        traj.lambda(t) = lambda;

        bool m_clamped = false;
        double mt, pi, one_minus_pi;
        if (traj.zero_inflation) {
            const double m_raw = U.row(t).dot(params.delta) + vt;
            if (!std::isfinite(m_raw)) {
                throw NumericalError("compute_states: non-finite predictor M at t=" +
                                     std::to_string(t + 1));
            }
            m_clamped = std::abs(m_raw) > kPredictorClamp;
            mt = std::clamp(m_raw, -kPredictorClamp, kPredictorClamp);
            pi = 1.0 / (1.0 + std::exp(-mt));
            one_minus_pi = 1.0 / (1.0 + std::exp(mt));
        } else {
            mt = -std::numeric_limits<double>::infinity();
            pi = 0.0;
            one_minus_pi = 1.0;
        }
        traj.m(t) = mt;
        traj.pi(t) = pi;
        traj.one_minus_pi(t) = one_minus_pi;
        if (w_clamped || m_clamped) ++traj.clamp_events;

        const double mean = lambda * one_minus_pi;
        const double scale = 1.0 + lambda * pi + lambda / k;
        const double var = mean * scale;
        traj.cond_mean(t) = mean;
        traj.cond_var(t) = var;

        const bool floored = var < kPsiFloor;
        if (floored) {
            ++traj.psi_floor_events;
            traj.e(t) = 0.0;
        } else {
            traj.e(t) = (static_cast<double>(y[static_cast<std::size_t>(t)]) - mean) /
                        std::sqrt(var);
        }

        if (!with_gradients) continue;

        dz.setZero();
        for (int i = 1; i <= p1; ++i) {
            if (t - i >= 0) {
                dz += params.phi(i - 1) * (d_z.row(t - i) + traj.d_e.row(t - i)).transpose();
                dz(layout.phi_begin() + i - 1) += traj.z(t - i) + traj.e(t - i);
            }
        }
        for (int j = 1; j <= q1; ++j) {
            if (t - j >= 0) {
                dz += params.theta(j - 1) * traj.d_e.row(t - j).transpose();
                dz(layout.theta_begin() + j - 1) += traj.e(t - j);
            }
        }
        d_z.row(t) = dz;

        dw = dz;
        dw.segment(layout.beta_begin(), layout.n1) += X.row(t).transpose();
        if (w_clamped) dw.setZero();
        traj.d_w.row(t) = dw;

        dv.setZero();
        dm.setZero();
        if (traj.zero_inflation) {
            for (int i = 1; i <= p2; ++i) {
                if (t - i >= 0) {
                    dv += params.alpha(i - 1) * (d_v.row(t - i) + traj.d_e.row(t - i)).transpose();
                    dv(layout.alpha_begin() + i - 1) += traj.v(t - i) + traj.e(t - i);
                }
            }
            for (int j = 1; j <= q2; ++j) {
                if (t - j >= 0) {
                    dv += params.gamma(j - 1) * traj.d_e.row(t - j).transpose();
                    dv(layout.gamma_begin() + j - 1) += traj.e(t - j);
                }
            }
            dm = dv;
            dm.segment(layout.delta_begin(), layout.n2) += U.row(t).transpose();
            if (m_clamped) dm.setZero();
        }
        d_v.row(t) = dv;
        traj.d_m.row(t) = dm;

        dlam = lambda * dw;
        dpi = pi * one_minus_pi * dm;
        dmean = one_minus_pi * dlam - lambda * dpi;
        dc = pi * dlam + lambda * dpi + dlam / k;
        dc(layout.k_index()) -= lambda / (k * k);
        dvar = scale * dmean + mean * dc;

        if (floored) {
            de.setZero();
        } else {
            de = -dmean / std::sqrt(var) - (traj.e(t) / (2.0 * var)) * dvar;
        }
        traj.d_e.row(t) = de;
    }

    return traj;
}

}  // namespace zinb
