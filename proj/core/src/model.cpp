#include "zinbarma/model.hpp"

#include <cmath>

#include "zinbarma/errors.hpp"

namespace zinb {

namespace {

void append(Eigen::VectorXd& out, int& pos, const Eigen::VectorXd& part) {
    out.segment(pos, part.size()) = part;
    pos += static_cast<int>(part.size());
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::VectorXd ParameterSet::flatten() const {
    Eigen::VectorXd out(total_size());
    int pos = 0;
    append(out, pos, beta);
    append(out, pos, phi);
    append(out, pos, theta);
    append(out, pos, delta);
    append(out, pos, alpha);
    append(out, pos, gamma);
    out(pos) = k;
    return out;
}

void ParameterSet::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ValidationError("ParameterSet: overdispersion k must be positive and finite");
    }
    if (!all_finite(beta) || !all_finite(phi) || !all_finite(theta) || !all_finite(delta) ||
        !all_finite(alpha) || !all_finite(gamma)) {
        throw ValidationError("ParameterSet: non-finite coefficient");
    }
}

void ModelSpec::validate(int series_length) const {
    if (p1 < 0 || q1 < 0 || p2 < 0 || q2 < 0) {
        throw ValidationError("ModelSpec: ARMA orders must be non-negative");
    }
    if (w_covariates.empty()) {
        throw ValidationError("ModelSpec: w_covariates must not be empty");
    }
    if (zero_inflated) {
        if (m_covariates.empty()) {
            throw ValidationError("ModelSpec: m_covariates must not be empty for a zero-inflated model");
        }
    } else {
        if (!m_covariates.empty() || p2 != 0 || q2 != 0) {
            throw ValidationError(
                "ModelSpec: zero_inflated=false requires empty m_covariates and p2=q2=0");
        }
    }
    if (series_length > 0) {
        for (int order : {p1, q1, p2, q2}) {
            if (order >= series_length) {
                throw ValidationError("ModelSpec: ARMA order must be < series length");
            }
        }
    }
    for (const auto& f : fixed) {
        const int size = f.family == CoefFamily::Phi     ? p1
                         : f.family == CoefFamily::Theta ? q1
                         : f.family == CoefFamily::Alpha ? p2
                                                         : q2;
        if (f.index < 1 || f.index > size) {
            throw ValidationError("ModelSpec: fixed coefficient index out of range");
        }
        if (!std::isfinite(f.value)) {
            throw ValidationError("ModelSpec: fixed coefficient value must be finite");
        }
    }
}

ParameterSet ModelSpec::zero_parameters() const {
    ParameterSet p;
    p.beta = Eigen::VectorXd::Zero(n1());
    p.phi = Eigen::VectorXd::Zero(p1);
    p.theta = Eigen::VectorXd::Zero(q1);
    p.delta = Eigen::VectorXd::Zero(n2());
    p.alpha = Eigen::VectorXd::Zero(p2);
    p.gamma = Eigen::VectorXd::Zero(q2);
    p.k = 1.0;
    apply_fixed(p);
    return p;
}

void ModelSpec::apply_fixed(ParameterSet& params) const {
    for (const auto& f : fixed) {
        switch (f.family) {
            case CoefFamily::Phi: params.phi(f.index - 1) = f.value; break;
            case CoefFamily::Theta: params.theta(f.index - 1) = f.value; break;
            case CoefFamily::Alpha: params.alpha(f.index - 1) = f.value; break;
            case CoefFamily::Gamma: params.gamma(f.index - 1) = f.value; break;
        }
    }
}

ParameterLayout ParameterLayout::from_spec(const ModelSpec& spec) {
    ParameterLayout l;
    l.n1 = spec.n1();
    l.p1 = spec.p1;
    l.q1 = spec.q1;
    l.n2 = spec.n2();
    l.p2 = spec.p2;
    l.q2 = spec.q2;
    return l;
}

ParameterLayout ParameterLayout::from_params(const ParameterSet& params) {
    ParameterLayout l;
    l.n1 = static_cast<int>(params.beta.size());
    l.p1 = static_cast<int>(params.phi.size());
    l.q1 = static_cast<int>(params.theta.size());
    l.n2 = static_cast<int>(params.delta.size());
    l.p2 = static_cast<int>(params.alpha.size());
    l.q2 = static_cast<int>(params.gamma.size());
    return l;
}

ParameterSet ParameterLayout::unflatten(const Eigen::VectorXd& v) const {
    if (v.size() != total()) {
        throw ValidationError("ParameterLayout::unflatten: length mismatch");
    }
    ParameterSet p;
    p.beta = v.segment(beta_begin(), n1);
    p.phi = v.segment(phi_begin(), p1);
    p.theta = v.segment(theta_begin(), q1);
    p.delta = v.segment(delta_begin(), n2);
    p.alpha = v.segment(alpha_begin(), p2);
    p.gamma = v.segment(gamma_begin(), q2);
    p.k = v(k_index());
    return p;
}

std::vector<int> ParameterLayout::free_indices(const std::vector<FixedCoefficient>& fixed) const {
    std::vector<bool> is_free(static_cast<std::size_t>(total()), true);
    for (const auto& f : fixed) {
        int base = 0;
        switch (f.family) {
            case CoefFamily::Phi: base = phi_begin(); break;
            case CoefFamily::Theta: base = theta_begin(); break;
            case CoefFamily::Alpha: base = alpha_begin(); break;
            case CoefFamily::Gamma: base = gamma_begin(); break;
        }
        is_free[static_cast<std::size_t>(base + f.index - 1)] = false;
    }
    std::vector<int> out;
    for (int i = 0; i < total(); ++i) {
        if (is_free[static_cast<std::size_t>(i)]) out.push_back(i);
    }
    return out;
}

std::vector<std::string> ParameterLayout::parameter_names(const ModelSpec& spec) const {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(total()));
    for (const auto& label : design_labels(spec.w_covariates)) names.push_back("lambda:" + label);
    for (int i = 1; i <= p1; ++i) names.push_back("lambda:AR" + std::to_string(i));
    for (int j = 1; j <= q1; ++j) names.push_back("lambda:MA" + std::to_string(j));
    if (!spec.m_covariates.empty()) {
        for (const auto& label : design_labels(spec.m_covariates)) names.push_back("pi:" + label);
    }
    for (int i = 1; i <= p2; ++i) names.push_back("pi:AR" + std::to_string(i));
    for (int j = 1; j <= q2; ++j) names.push_back("pi:MA" + std::to_string(j));
    names.push_back("overdispersion:k");
    return names;
}

}  // namespace zinb
