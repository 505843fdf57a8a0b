#include "zinbarma/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "zinbarma/errors.hpp"
#include "zinbarma/polynomial.hpp"
#include "zinbarma/stats.hpp"

namespace zinb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Maps between the full natural parameter vector and the internal optimizer
/// coordinates: free entries only, with k replaced by log k.
struct InternalMap {
    ParameterLayout layout;
    std::vector<int> free;
    ParameterSet base;  // supplies pinned coefficient values

    [[nodiscard]] int dim() const { return static_cast<int>(free.size()); }

    [[nodiscard]] Eigen::VectorXd to_internal(const ParameterSet& p) const {
        const Eigen::VectorXd flat = p.flatten();
        Eigen::VectorXd eta(dim());
        for (int j = 0; j < dim(); ++j) {
            eta(j) = free[static_cast<std::size_t>(j)] == layout.k_index()
                         ? std::log(flat(free[static_cast<std::size_t>(j)]))
                         : flat(free[static_cast<std::size_t>(j)]);
        }
        return eta;
    }

    [[nodiscard]] ParameterSet from_internal(const Eigen::VectorXd& eta) const {
        Eigen::VectorXd flat = base.flatten();
        for (int j = 0; j < dim(); ++j) {
            const int idx = free[static_cast<std::size_t>(j)];
            flat(idx) = idx == layout.k_index() ? std::exp(eta(j)) : eta(j);
        }
        return layout.unflatten(flat);
    }

    /// Chain rule from the natural score to internal coordinates.
    [[nodiscard]] Eigen::VectorXd select_score(const Eigen::VectorXd& natural, double k) const {
        Eigen::VectorXd s(dim());
        for (int j = 0; j < dim(); ++j) {
            const int idx = free[static_cast<std::size_t>(j)];
            s(j) = idx == layout.k_index() ? natural(idx) * k : natural(idx);
        }
        return s;
    }
};

struct NewtonControls {
    int max_iterations = 200;
    double step_tolerance = 1e-8;
    double value_tolerance = 1e-10;  // 0 disables
    double grad_tolerance = 0.0;     // 0 disables
};

struct NewtonOutcome {
    Eigen::VectorXd x;
    double value = kNegInf;
    int iterations = 0;
    bool converged = false;
    bool singular = false;
    int ridge_uses = 0;
    std::vector<double> trace;
};

using ValueFn = std::function<double(const Eigen::VectorXd&)>;
using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::MatrixXd fd_information(const GradFn& grad, const Eigen::VectorXd& x) {
    const int p = static_cast<int>(x.size());
    Eigen::MatrixXd h_mat(p, p);
    for (int i = 0; i < p; ++i) {
        const double h = std::max(1e-5, 1e-5 * std::abs(x(i)));
        Eigen::VectorXd up = x, dn = x;
        up(i) += h;
        dn(i) -= h;
        h_mat.col(i) = -(grad(up) - grad(dn)) / (2.0 * h);
    }
    return 0.5 * (h_mat + h_mat.transpose());
}

/// Newton ascent with step halving and a ridge fallback for indefinite or
/// singular curvature.
NewtonOutcome newton_maximize(const ValueFn& value, const GradFn& grad, Eigen::VectorXd x,
                              const NewtonControls& ctl) {
    NewtonOutcome out;
    double f = value(x);
    if (!std::isfinite(f)) {
        throw NumericalError("newton_maximize: non-finite objective at starting point");
    }
    out.trace.push_back(f);

    const int p = static_cast<int>(x.size());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);

    for (int it = 1; it <= ctl.max_iterations; ++it) {
        out.iterations = it;
        const Eigen::VectorXd g = grad(x);
        if (ctl.grad_tolerance > 0.0 && g.cwiseAbs().maxCoeff() < ctl.grad_tolerance) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd info = fd_information(grad, x);

        // Ridge sized relative to the curvature magnitude so the damping
        // ladder works at any sample size.
        const double curvature_scale =
            std::max(1.0, info.diagonal().cwiseAbs().maxCoeff());
        Eigen::VectorXd direction;
        bool have_direction = false;
        for (double ridge : {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(info + ridge * curvature_scale * eye);
            if (ldlt.info() != Eigen::Success) continue;
            const Eigen::VectorXd d = ldlt.solve(g);
            if (!d.allFinite()) continue;
            if (d.dot(g) <= 0.0) continue;  // require an ascent direction
            direction = d;
            have_direction = true;
            if (ridge > 0.0) ++out.ridge_uses;
            break;
        }
        if (!have_direction) {
            out.singular = true;
            break;
        }
        if (direction.cwiseAbs().maxCoeff() < ctl.step_tolerance) {
            out.converged = true;
            break;
        }

        double alpha = 1.0;
        double f_new = kNegInf;
        bool accepted = false;
        while (alpha >= 1e-12) {
            f_new = value(x + alpha * direction);
            if (std::isfinite(f_new) && f_new > f) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // Newton direction exhausted; try steepest ascent before
            // declaring a stall (the FD Hessian can stop helping near flat
            // ridges while the gradient still has signal).
            const Eigen::VectorXd steepest = g / curvature_scale;
            alpha = 1.0;
            while (alpha >= 1e-12) {
                f_new = value(x + alpha * steepest);
                if (std::isfinite(f_new) && f_new > f) {
                    accepted = true;
                    direction = steepest;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if (!accepted) {
            out.converged = g.cwiseAbs().maxCoeff() < 1e-4 * (1.0 + std::abs(f));
            break;
        }

        const double step_size = alpha * direction.cwiseAbs().maxCoeff();
        x += alpha * direction;
        out.trace.push_back(f_new);
        const double gain = f_new - f;
        f = f_new;
        if (step_size < ctl.step_tolerance ||
            (ctl.value_tolerance > 0.0 && std::abs(gain) < ctl.value_tolerance)) {
            out.converged = true;
            break;
        }
    }

    out.x = std::move(x);
    out.value = f;
    return out;
}

InternalMap make_map(const ModelSpec& spec, const ParameterSet& base) {
    InternalMap map;
    map.layout = ParameterLayout::from_spec(spec);
    map.free = map.layout.free_indices(spec.fixed);
    map.base = base;
    return map;
}

/// Condition-aware inverse of the internal information; natural-scale
/// covariance via the delta method for the log-k coordinate.
bool invert_information(const Eigen::MatrixXd& info, const InternalMap& map, double k_hat,
                        Eigen::MatrixXd& cov_out, std::string& diagnostic) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(info, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > 0.0) || smin < smax * 1e-12) {
        diagnostic = "information matrix not invertible (condition number " +
                     std::to_string(smin > 0.0 ? smax / smin
                                               : std::numeric_limits<double>::infinity()) +
                     ")";
        return false;
    }
    Eigen::MatrixXd cov = svd.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
    // log k -> k back-transform: scale the k row/column by k_hat.
    for (int j = 0; j < map.dim(); ++j) {
        if (map.free[static_cast<std::size_t>(j)] == map.layout.k_index()) {
            cov.row(j) *= k_hat;
            cov.col(j) *= k_hat;
        }
    }
    cov_out = 0.5 * (cov + cov.transpose());
    return true;
}

void finalize_fit(FitResult& fr, const Dataset& data, const Eigen::MatrixXd& X,
                  const Eigen::MatrixXd& U, const InternalMap& map) {
    const auto& y = data.y;
    fr.trajectory = compute_states(fr.params, X, U, y);
    fr.n_obs = data.n();
    fr.n_params = map.dim();
    fr.free_indices = map.free;
    const auto all_names = map.layout.parameter_names(fr.spec);
    fr.free_names.clear();
    for (int idx : map.free) fr.free_names.push_back(all_names[static_cast<std::size_t>(idx)]);

    const GradFn grad_int = [&](const Eigen::VectorXd& eta) {
        const ParameterSet p = map.from_internal(eta);
        return map.select_score(score(p, X, U, y), p.k);
    };
    const Eigen::VectorXd eta_hat = map.to_internal(fr.params);
    std::string diag;
    Eigen::MatrixXd cov;
    try {
        const Eigen::MatrixXd info = fd_information(grad_int, eta_hat);
        if (invert_information(info, map, fr.params.k, cov, diag)) {
            fr.cov = cov;
            fr.cov_valid = cov.diagonal().minCoeff() >= 0.0;
            if (!fr.cov_valid) {
                fr.warnings.push_back("covariance has negative diagonal entries");
            } else {
                fr.se = cov.diagonal().cwiseSqrt();
            }
        } else {
            fr.cov_valid = false;
            fr.warnings.push_back(diag);
        }
    } catch (const NumericalError& err) {
        fr.cov_valid = false;
        fr.warnings.push_back(std::string("uncertainty computation failed: ") + err.what());
    }

    if (fr.trajectory.clamp_events > 0) {
        fr.warnings.push_back("predictor clamping occurred " +
                              std::to_string(fr.trajectory.clamp_events) + " times");
    }
    if (fr.trajectory.psi_floor_events > 0) {
        fr.warnings.push_back("conditional variance floor triggered " +
                              std::to_string(fr.trajectory.psi_floor_events) + " times");
    }
}

void add_root_advisories(FitResult& fr) {
    const auto warn = [&fr](const char* label, const Eigen::VectorXd& coeffs,
                            PolynomialKind kind) {
        const RootCheck rc = check_polynomial_roots(coeffs, kind);
        if (!rc.ok) {
            fr.warnings.push_back(std::string(label) +
                                  " polynomial has a root inside the unit circle (min modulus " +
                                  std::to_string(rc.min_root_modulus) + ")");
        }
    };
    warn("AR (log-mean)", fr.params.phi, PolynomialKind::Ar);
    warn("MA (log-mean)", fr.params.theta, PolynomialKind::Ma);
    warn("AR (logit)", fr.params.alpha, PolynomialKind::Ar);
    warn("MA (logit)", fr.params.gamma, PolynomialKind::Ma);
}

}  // namespace

Eigen::VectorXd FitResult::estimates() const {
    const Eigen::VectorXd flat = params.flatten();
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_indices.size()));
    for (std::size_t j = 0; j < free_indices.size(); ++j) {
        out(static_cast<Eigen::Index>(j)) = flat(free_indices[j]);
    }
    return out;
}

ParameterSet initialize(const Dataset& data, const ModelSpec& spec) {
    data.validate();
    spec.validate(data.n());
    const int n = data.n();
    const int max_order = std::max({spec.p1, spec.q1, spec.p2, spec.q2});
    if (n <= spec.n1() + spec.n2() + max_order) {
        throw ValidationError("initialize: series too short for the requested model");
    }

    bool any_positive = false;
    for (auto v : data.y) {
        if (v > 0) {
            any_positive = true;
            break;
        }
    }
    if (!any_positive) {
        throw ValidationError("initialize: cannot initialize NB component (all counts are zero)");
    }

    ParameterSet p = spec.zero_parameters();
    const Eigen::MatrixXd X = build_design(spec.w_covariates, data);

    // Log-linear moment fit on max(y, 0.5).
    Eigen::VectorXd log_y(n);
    for (int t = 0; t < n; ++t) {
        log_y(t) = std::log(std::max(0.5, static_cast<double>(data.y[static_cast<std::size_t>(t)])));
    }
    p.beta = X.colPivHouseholderQr().solve(log_y);

    // Method-of-moments overdispersion from the positive counts.
    std::vector<double> positives;
    for (auto v : data.y) {
        if (v > 0) positives.push_back(static_cast<double>(v));
    }
    double k_init = 1.0;
    if (positives.size() >= 2) {
        const Eigen::Map<Eigen::VectorXd> pos(positives.data(),
                                              static_cast<Eigen::Index>(positives.size()));
        const double m = pos.mean();
        const double s2 = (pos.array() - m).square().sum() / static_cast<double>(pos.size() - 1);
        k_init = m * m / std::max(s2 - m, 0.1);
    }
    p.k = std::clamp(k_init, 1e-3, 1e4);

    if (spec.zero_inflated) {
        // Excess-zero logit on the intercept slot (when present).
        int intercept_col = -1;
        int col = 0;
        for (const auto& r : spec.m_covariates) {
            if (r.kind == CovariateKind::Intercept) {
                intercept_col = col;
                break;
            }
            col += r.width();
        }
        if (intercept_col >= 0) {
            double nb_zero = 0.0;
            for (int t = 0; t < n; ++t) {
                const double w = std::clamp(X.row(t).dot(p.beta), -kPredictorClamp,
                                            kPredictorClamp);
                const double lam = std::exp(w);
                nb_zero += std::exp(p.k * (std::log(p.k) - std::log(p.k + lam)));
            }
            nb_zero /= static_cast<double>(n);
            const double excess = std::clamp(data.zero_fraction() - nb_zero, 0.01, 0.99);
            p.delta(intercept_col) = std::log(excess / (1.0 - excess));
        }
    }

    spec.apply_fixed(p);
    return p;
}

FitResult fit_newton_raphson(const Dataset& data, const ModelSpec& spec,
                             const ParameterSet& init) {
    data.validate();
    spec.validate(data.n());
    init.validate();
    const Eigen::MatrixXd X = build_design(spec.w_covariates, data);
    const Eigen::MatrixXd U =
        spec.zero_inflated ? build_design(spec.m_covariates, data)
                           : Eigen::MatrixXd::Zero(data.n(), 0);
    const auto& y = data.y;

    ParameterSet start = init;
    spec.apply_fixed(start);
    const InternalMap map = make_map(spec, start);

    const ValueFn value = [&](const Eigen::VectorXd& eta) {
        return detail::partial_loglik_or_neg_inf(map.from_internal(eta), X, U, y);
    };
    const GradFn grad = [&](const Eigen::VectorXd& eta) {
        const ParameterSet p = map.from_internal(eta);
        return map.select_score(score(p, X, U, y), p.k);
    };

    if (!std::isfinite(value(map.to_internal(start)))) {
        throw NumericalError("fit_newton_raphson: non-finite likelihood at starting values");
    }

    NewtonControls ctl;
    ctl.max_iterations = spec.estimation.max_iterations;
    ctl.step_tolerance = spec.estimation.step_tolerance;
    ctl.value_tolerance = spec.estimation.loglik_tolerance;
    const NewtonOutcome outcome = newton_maximize(value, grad, map.to_internal(start), ctl);
    if (outcome.singular) {
        throw NumericalError(
            "fit_newton_raphson: singular information matrix after ridge escalation");
    }

    FitResult fr;
    fr.spec = spec;
    fr.method = FitMethod::NewtonRaphson;
    fr.params = map.from_internal(outcome.x);
    fr.loglik = outcome.value;
    fr.converged = outcome.converged;
    fr.iterations = outcome.iterations;
    fr.trace = outcome.trace;
    if (outcome.ridge_uses > 0) {
        fr.warnings.push_back("ridge fallback used " + std::to_string(outcome.ridge_uses) +
                              " times");
    }
    finalize_fit(fr, data, X, U, map);
    add_root_advisories(fr);
    return fr;
}

FitResult fit_em(const Dataset& data, const ModelSpec& spec, const ParameterSet& init) {
    data.validate();
    spec.validate(data.n());
    init.validate();
    const Eigen::MatrixXd X = build_design(spec.w_covariates, data);
    const Eigen::MatrixXd U =
        spec.zero_inflated ? build_design(spec.m_covariates, data)
                           : Eigen::MatrixXd::Zero(data.n(), 0);
    const auto& y = data.y;

    ParameterSet current = init;
    spec.apply_fixed(current);
    const InternalMap map = make_map(spec, current);

    FitResult fr;
    fr.spec = spec;
    fr.method = FitMethod::Em;

    double pl_prev = detail::partial_loglik_or_neg_inf(current, X, U, y);
    if (!std::isfinite(pl_prev)) {
        throw NumericalError("fit_em: non-finite likelihood at starting values");
    }
    fr.trace.push_back(pl_prev);

    NewtonControls inner_ctl;
    inner_ctl.max_iterations = spec.estimation.em_inner_max_iterations;
    inner_ctl.step_tolerance = spec.estimation.step_tolerance;
    inner_ctl.value_tolerance = 0.0;  // inner stop on gradient/step only
    inner_ctl.grad_tolerance = spec.estimation.em_inner_grad_tolerance;

    bool converged = false;
    int outer = 0;
    int ridge_uses = 0;
    for (outer = 1; outer <= spec.estimation.em_max_iterations; ++outer) {
        const Eigen::VectorXd s_hat = e_step(current, X, U, y);

        const ValueFn q_value = [&](const Eigen::VectorXd& eta) {
            return detail::q_function_or_neg_inf(map.from_internal(eta), X, U, y, s_hat);
        };
        const GradFn q_grad = [&](const Eigen::VectorXd& eta) {
            const ParameterSet p = map.from_internal(eta);
            return map.select_score(q_score(p, X, U, y, s_hat), p.k);
        };

        NewtonOutcome m_step;
        try {
            m_step = newton_maximize(q_value, q_grad, map.to_internal(current), inner_ctl);
        } catch (const NumericalError& err) {
            fr.warnings.push_back(std::string("M-step failed: ") + err.what());
            break;
        }
        if (m_step.singular) {
            fr.warnings.push_back("M-step information singular after ridge escalation");
            break;
        }
        ridge_uses += m_step.ridge_uses;
        current = map.from_internal(m_step.x);

        const double pl = detail::partial_loglik_or_neg_inf(current, X, U, y);
        if (!std::isfinite(pl)) {
            throw NumericalError("fit_em: non-finite likelihood after M-step");
        }
        if (pl < pl_prev - 1e-8) {
            throw NumericalError("fit_em: observed partial log-likelihood decreased by " +
                                 std::to_string(pl_prev - pl) + " at iteration " +
                                 std::to_string(outer));
        }
        fr.trace.push_back(pl);
        const double rel_change = std::abs(pl - pl_prev) / (std::abs(pl_prev) + 1e-12);
        pl_prev = pl;
        if (rel_change < spec.estimation.em_tolerance) {
            converged = true;
            break;
        }
    }

    fr.params = current;
    fr.loglik = pl_prev;
    fr.converged = converged;
    fr.iterations = std::min(outer, spec.estimation.em_max_iterations);
    if (ridge_uses > 0) {
        fr.warnings.push_back("ridge fallback used " + std::to_string(ridge_uses) + " times");
    }
    finalize_fit(fr, data, X, U, map);
    add_root_advisories(fr);
    return fr;
}

FitResult fit(const Dataset& data, const ModelSpec& spec) {
    const ParameterSet init = initialize(data, spec);
    return spec.estimation.method == FitMethod::Em ? fit_em(data, spec, init)
                                                   : fit_newton_raphson(data, spec, init);
}

FitResult evaluate_at(const Dataset& data, const ModelSpec& spec, const ParameterSet& params) {
    data.validate();
    spec.validate(data.n());
    params.validate();
    const Eigen::MatrixXd X = build_design(spec.w_covariates, data);
    const Eigen::MatrixXd U =
        spec.zero_inflated ? build_design(spec.m_covariates, data)
                           : Eigen::MatrixXd::Zero(data.n(), 0);

    FitResult fr;
    fr.spec = spec;
    fr.method = spec.estimation.method;
    fr.params = params;
    fr.spec.apply_fixed(fr.params);
    fr.loglik = partial_loglik(fr.params, X, U, data.y);
    fr.converged = true;
    const InternalMap map = make_map(spec, fr.params);
    fr.trajectory = compute_states(fr.params, X, U, data.y);
    fr.n_obs = data.n();
    fr.n_params = map.dim();
    fr.free_indices = map.free;
    const auto all_names = map.layout.parameter_names(spec);
    for (int idx : map.free) fr.free_names.push_back(all_names[static_cast<std::size_t>(idx)]);
    fr.cov_valid = false;
    return fr;
}

std::pair<Eigen::VectorXd, std::vector<ConfidenceInterval>> standard_errors(
    const FitResult& fit) {
    if (!fit.cov_valid) {
        std::string detail = "covariance unavailable";
        for (const auto& w : fit.warnings) {
            if (w.find("condition") != std::string::npos) detail = w;
        }
        throw NumericalError("standard_errors: " + detail);
    }
    const Eigen::VectorXd est = fit.estimates();
    const Eigen::VectorXd se = fit.cov.diagonal().cwiseSqrt();
    std::vector<ConfidenceInterval> cis;
    cis.reserve(static_cast<std::size_t>(se.size()));
    for (int i = 0; i < se.size(); ++i) {
        cis.push_back({est(i) - 1.96 * se(i), est(i) + 1.96 * se(i)});
    }
    return {se, cis};
}

WaldResult wald_test(const FitResult& fit, const Eigen::MatrixXd& C,
                     const Eigen::VectorXd& zeta) {
    if (!fit.cov_valid) throw NumericalError("wald_test: fit covariance unavailable");
    if (C.cols() != static_cast<Eigen::Index>(fit.n_params) || C.rows() != zeta.size()) {
        throw ValidationError("wald_test: dimension mismatch");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    if (lu.rank() < C.rows()) {
        throw ValidationError("wald_test: constraint matrix is rank deficient");
    }
    const Eigen::VectorXd diff = C * fit.estimates() - zeta;
    const Eigen::MatrixXd mid = C * fit.cov * C.transpose();
    const Eigen::VectorXd solved = mid.ldlt().solve(diff);
    WaldResult r;
    r.statistic = diff.dot(solved);
    r.df = static_cast<int>(C.rows());
    r.p_value = stats::chi_squared_sf(r.statistic, r.df);
    return r;
}

LrtResult likelihood_ratio_test(const FitResult& fit_small, const FitResult& fit_big) {
    if (fit_big.n_params <= fit_small.n_params) {
        throw ValidationError("likelihood_ratio_test: models are not nested (df <= 0)");
    }
    if (fit_big.loglik < fit_small.loglik - 1e-6) {
        throw NumericalError(
            "likelihood_ratio_test: larger model has smaller log-likelihood; check nesting "
            "and convergence");
    }
    LrtResult r;
    r.statistic = std::max(0.0, 2.0 * (fit_big.loglik - fit_small.loglik));
    r.df = fit_big.n_params - fit_small.n_params;
    r.p_value = stats::chi_squared_sf(r.statistic, r.df);
    return r;
}

VuongResult vuong_from_differences(const Eigen::VectorXd& differences) {
    if (differences.size() < 2) {
        throw ValidationError("vuong_from_differences: need at least 2 observations");
    }
    const double mbar = differences.mean();
    const double sd = std::sqrt(stats::sample_variance(differences));
    if (!(sd > 0.0)) {
        throw NumericalError(
            "vuong test: per-observation likelihood differences have zero standard deviation");
    }
    VuongResult r;
    r.z = std::sqrt(static_cast<double>(differences.size())) * mbar / sd;
    r.p_value = 1.0 - stats::normal_cdf(r.z);
    return r;
}

VuongResult vuong_test(const FitResult& fit_zinb, const FitResult& fit_nb, const Dataset& data) {
    if (!fit_zinb.spec.zero_inflated || fit_nb.spec.zero_inflated) {
        throw ValidationError("vuong_test: expects a zero-inflated fit and a plain NB fit");
    }
    if (fit_zinb.n_obs != data.n() || fit_nb.n_obs != data.n()) {
        throw ValidationError("vuong_test: fits do not match the dataset length");
    }
    const Eigen::MatrixXd Xz = build_design(fit_zinb.spec.w_covariates, data);
    const Eigen::MatrixXd Uz = build_design(fit_zinb.spec.m_covariates, data);
    const Eigen::MatrixXd Xn = build_design(fit_nb.spec.w_covariates, data);
    const Eigen::MatrixXd Un = Eigen::MatrixXd::Zero(data.n(), 0);

    const Eigen::VectorXd lz = per_observation_loglik(fit_zinb.params, Xz, Uz, data.y);
    const Eigen::VectorXd ln = per_observation_loglik(fit_nb.params, Xn, Un, data.y);
    return vuong_from_differences(lz - ln);
}

}  // namespace zinb
