#include "zinbarma/likelihood.hpp"

#include <cmath>
#include <limits>

#include "zinbarma/errors.hpp"
#include "zinbarma/stats.hpp"

namespace zinb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ObsTerms {
    double log_pi;      // -inf without zero inflation
    double log_1mpi;    // 0 without zero inflation
    double log_pt;      // log p_tilde
    double log_1mpt;    // log(1 - p_tilde)
    double pt;
};

ObsTerms obs_terms(const StateTrajectory& traj, double k, int t) {
    ObsTerms o;
    const double m = traj.m(t);
    if (traj.zero_inflation) {
        o.log_pi = m - stats::softplus(m);
        o.log_1mpi = -stats::softplus(m);
    } else {
        o.log_pi = kNegInf;
        o.log_1mpi = 0.0;
    }
    const double lambda = traj.lambda(t);
    const double log_k_lam = std::log(k + lambda);
    o.log_pt = std::log(k) - log_k_lam;
    o.log_1mpt = traj.w(t) - log_k_lam;  // log lambda = W after clamping
    o.pt = k / (k + lambda);
    return o;
}

double obs_loglik(const StateTrajectory& traj, double k, std::int64_t y, int t) {
    const ObsTerms o = obs_terms(traj, k, t);
    if (y == 0) {
        return stats::log_sum_exp(o.log_pi, o.log_1mpi + k * o.log_pt);
    }
    const auto yd = static_cast<double>(y);
    return o.log_1mpi + std::lgamma(k + yd) - std::lgamma(k) - std::lgamma(yd + 1.0) +
           k * o.log_pt + yd * o.log_1mpt;
}

}  // namespace

Eigen::VectorXd per_observation_loglik(const ParameterSet& params, const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& U,
                                       const std::vector<std::int64_t>& y) {
    const StateTrajectory traj = compute_states(params, X, U, y);
    Eigen::VectorXd out(traj.n());
    for (int t = 0; t < traj.n(); ++t) {
        out(t) = obs_loglik(traj, params.k, y[static_cast<std::size_t>(t)], t);
    }
    return out;
}

double partial_loglik(const ParameterSet& params, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y) {
    const Eigen::VectorXd terms = per_observation_loglik(params, X, U, y);
    double total = 0.0;
    for (int t = 0; t < terms.size(); ++t) {
        if (!std::isfinite(terms(t))) {
            throw NumericalError("partial_loglik: non-finite contribution at t=" +
                                 std::to_string(t + 1));
        }
        total += terms(t);
    }
    return total;
}

double detail::partial_loglik_or_neg_inf(const ParameterSet& params, const Eigen::MatrixXd& X,
                                         const Eigen::MatrixXd& U,
                                         const std::vector<std::int64_t>& y) {
    try {
        const Eigen::VectorXd terms = per_observation_loglik(params, X, U, y);
        const double total = terms.sum();
        return std::isfinite(total) ? total : kNegInf;
    } catch (const NumericalError&) {
        return kNegInf;
    }
}

Eigen::VectorXd score(const ParameterSet& params, const Eigen::MatrixXd& X,
                      const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y) {
    const StateTrajectory traj = compute_states(params, X, U, y, /*with_gradients=*/true);
    const auto layout = ParameterLayout::from_params(params);
    const int P = layout.total();
    const int k_idx = layout.k_index();
    const double k = params.k;

    Eigen::VectorXd s = Eigen::VectorXd::Zero(P);
    Eigen::VectorXd dpt(P);
    for (int t = 0; t < traj.n(); ++t) {
        const std::int64_t yt = y[static_cast<std::size_t>(t)];
        const double lambda = traj.lambda(t);
        const double pi = traj.pi(t);
        const double one_m_pi = traj.one_minus_pi(t);
        const ObsTerms o = obs_terms(traj, k, t);
        const double pt = o.pt;

        const auto d_w = traj.d_w.row(t).transpose();
        const auto d_m = traj.d_m.row(t).transpose();

        // d p_tilde: chain through lambda = exp(W), plus the direct k term.
        dpt = (-pt * (1.0 - pt)) * d_w;
        dpt(k_idx) += lambda / ((k + lambda) * (k + lambda));

        if (yt == 0) {
            const double log_a = stats::log_sum_exp(o.log_pi, o.log_1mpi + k * o.log_pt);
            if (!std::isfinite(log_a)) {
                throw NumericalError("score: vanishing zero-probability at t=" +
                                     std::to_string(t + 1));
            }
            // weights against a = pi + (1-pi) pt^k
            const double one_m_ptk = -std::expm1(k * o.log_pt);  // 1 - pt^k
            const double w_pi = one_m_ptk * std::exp(-log_a) * pi * one_m_pi;
            const double w_pt = k * std::exp(o.log_1mpi + (k - 1.0) * o.log_pt - log_a);
            const double r = std::exp(o.log_1mpi + k * o.log_pt - log_a);  // (1-pi) pt^k / a
            s += w_pi * d_m + w_pt * dpt;
            s(k_idx) += r * o.log_pt;
        } else {
            const auto yd = static_cast<double>(yt);
            // -dpi/(1-pi) = -pi dM; written that way to stay finite as pi -> 1.
            s += (-pi) * d_m + (k / pt - yd / (1.0 - pt)) * dpt;
            s(k_idx) += stats::digamma(k + yd) - stats::digamma(k) + o.log_pt;
        }
    }
    if (!s.allFinite()) {
        throw NumericalError("score: non-finite gradient");
    }
    return s;
}

Eigen::MatrixXd observed_information(const ParameterSet& params, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& U,
                                     const std::vector<std::int64_t>& y) {
    const auto layout = ParameterLayout::from_params(params);
    const int P = layout.total();
    const Eigen::VectorXd center = params.flatten();

    Eigen::MatrixXd H(P, P);
    for (int i = 0; i < P; ++i) {
        double h = std::max(1e-5, 1e-5 * std::abs(center(i)));
        if (i == layout.k_index()) h = std::min(h, 0.4 * params.k);  // keep k positive
        Eigen::VectorXd up = center, dn = center;
        up(i) += h;
        dn(i) -= h;
        const Eigen::VectorXd s_up = score(layout.unflatten(up), X, U, y);
        const Eigen::VectorXd s_dn = score(layout.unflatten(dn), X, U, y);
        H.col(i) = -(s_up - s_dn) / (2.0 * h);
    }
    Eigen::MatrixXd sym = 0.5 * (H + H.transpose());
    if (!sym.allFinite()) {
        throw NumericalError("observed_information: non-finite entry");
    }
    return sym;
}

double q_function(const ParameterSet& params, const Eigen::MatrixXd& X, const Eigen::MatrixXd& U,
                  const std::vector<std::int64_t>& y, const Eigen::VectorXd& s_hat) {
    if (s_hat.size() != static_cast<Eigen::Index>(y.size())) {
        throw ValidationError("q_function: s_hat length mismatch");
    }
    const StateTrajectory traj = compute_states(params, X, U, y);
    const double k = params.k;
    double q = 0.0;
    for (int t = 0; t < traj.n(); ++t) {
        const std::int64_t yt = y[static_cast<std::size_t>(t)];
        const double st = s_hat(t);
        const ObsTerms o = obs_terms(traj, k, t);
        if (traj.zero_inflation) {
            q += (st > 0.0 ? st * o.log_pi : 0.0) + (1.0 - st) * o.log_1mpi;
        }
        const auto yd = static_cast<double>(yt);
        const double nb_term = yt == 0 ? k * o.log_pt
                                       : std::lgamma(k + yd) - std::lgamma(k) -
                                             std::lgamma(yd + 1.0) + k * o.log_pt +
                                             yd * o.log_1mpt;
        q += (1.0 - st) * nb_term;
    }
    if (!std::isfinite(q)) {
        throw NumericalError("q_function: non-finite value");
    }
    return q;
}

double detail::q_function_or_neg_inf(const ParameterSet& params, const Eigen::MatrixXd& X,
                                     const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                                     const Eigen::VectorXd& s_hat) {
    try {
        return q_function(params, X, U, y, s_hat);
    } catch (const NumericalError&) {
        return kNegInf;
    }
}

Eigen::VectorXd q_score(const ParameterSet& params, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y,
                        const Eigen::VectorXd& s_hat) {
    if (s_hat.size() != static_cast<Eigen::Index>(y.size())) {
        throw ValidationError("q_score: s_hat length mismatch");
    }
    const StateTrajectory traj = compute_states(params, X, U, y, /*with_gradients=*/true);
    const auto layout = ParameterLayout::from_params(params);
    const int P = layout.total();
    const int k_idx = layout.k_index();
    const double k = params.k;

    Eigen::VectorXd s = Eigen::VectorXd::Zero(P);
    Eigen::VectorXd dpt(P);
    for (int t = 0; t < traj.n(); ++t) {
        const std::int64_t yt = y[static_cast<std::size_t>(t)];
        const double st = s_hat(t);
        const double lambda = traj.lambda(t);
        const double pi = traj.pi(t);
        const ObsTerms o = obs_terms(traj, k, t);
        const double pt = o.pt;

        const auto d_w = traj.d_w.row(t).transpose();
        const auto d_m = traj.d_m.row(t).transpose();

        dpt = (-pt * (1.0 - pt)) * d_w;
        dpt(k_idx) += lambda / ((k + lambda) * (k + lambda));

        // Bernoulli part: (s/pi - (1-s)/(1-pi)) dpi = (s - pi) dM.
        if (traj.zero_inflation) s += (st - pi) * d_m;

        const auto yd = static_cast<double>(yt);
        const double weight = 1.0 - st;
        s += weight * (k / pt - yd / (1.0 - pt)) * dpt;
        const double k_direct =
            yt == 0 ? o.log_pt : stats::digamma(k + yd) - stats::digamma(k) + o.log_pt;
        s(k_idx) += weight * k_direct;
    }
    if (!s.allFinite()) {
        throw NumericalError("q_score: non-finite gradient");
    }
    return s;
}

Eigen::VectorXd e_step(const ParameterSet& params, const Eigen::MatrixXd& X,
                       const Eigen::MatrixXd& U, const std::vector<std::int64_t>& y) {
    const StateTrajectory traj = compute_states(params, X, U, y);
    Eigen::VectorXd s_hat = Eigen::VectorXd::Zero(traj.n());
    if (!traj.zero_inflation) return s_hat;
    const double k = params.k;
    for (int t = 0; t < traj.n(); ++t) {
        if (y[static_cast<std::size_t>(t)] != 0) continue;
        const ObsTerms o = obs_terms(traj, k, t);
        // pi / (pi + (1-pi) pt^k), computed through the log-odds gap.
        const double gap = (o.log_1mpi + k * o.log_pt) - o.log_pi;
        s_hat(t) = 1.0 / (1.0 + std::exp(gap));
    }
    return s_hat;
}

}  // namespace zinb
