#include "zinbarma/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "zinbarma/errors.hpp"
#include "zinbarma/stats.hpp"
#include "zinbarma/version.hpp"

namespace zinb {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double_strict(const std::string& field, const std::string& context) {
    if (field.empty()) throw ValidationError("missing value " + context);
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ValidationError("non-numeric value '" + field + "' " + context);
    }
    return value;
}

std::int64_t parse_count_strict(const std::string& field, const std::string& context) {
    const double v = parse_double_strict(field, context);
    if (v < 0.0) throw ValidationError("negative count " + context);
    const double rounded = std::nearbyint(v);
    if (std::abs(v - rounded) > 0.0 || std::abs(v) > 9.0e15) {
        throw ValidationError("non-integer count '" + field + "' " + context);
    }
    return static_cast<std::int64_t>(rounded);
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ValidationError("config: unknown key '" + path + "/" + key + "'");
        }
    }
}

CovariateRecipe parse_recipe(const json& node, const std::string& path) {
    if (!node.is_object()) throw ValidationError("config: " + path + " must be an object");
    const std::string kind = node.value("kind", "");
    CovariateRecipe r;
    if (kind == "intercept") {
        require_keys(node, {"kind"}, path);
        r = CovariateRecipe::intercept();
    } else if (kind == "linear-trend") {
        require_keys(node, {"kind", "denominator"}, path);
        if (node.contains("denominator")) {
            const double d = node.at("denominator").get<double>();
            if (!(d > 0.0)) {
                throw ValidationError("config: " + path + "/denominator must be positive");
            }
            r = CovariateRecipe::linear_trend_scaled(d);
        } else {
            r = CovariateRecipe::linear_trend();
        }
    } else if (kind == "harmonic") {
        require_keys(node, {"kind", "period"}, path);
        if (!node.contains("period")) {
            throw ValidationError("config: " + path + " requires 'period'");
        }
        const double period = node.at("period").get<double>();
        if (!(period > 0.0)) {
            throw ValidationError("config: " + path + "/period must be positive");
        }
        r = CovariateRecipe::harmonic(period);
    } else if (kind == "external") {
        require_keys(node, {"kind", "column"}, path);
        if (!node.contains("column") || node.at("column").get<std::string>().empty()) {
            throw ValidationError("config: " + path + " requires a non-empty 'column'");
        }
        r = CovariateRecipe::external(node.at("column").get<std::string>());
    } else if (kind == "lagged-indicator") {
        require_keys(node, {"kind", "lag"}, path);
        if (!node.contains("lag")) throw ValidationError("config: " + path + " requires 'lag'");
        const int lag = node.at("lag").get<int>();
        if (lag < 1) throw ValidationError("config: " + path + "/lag must be >= 1");
        r = CovariateRecipe::lagged_indicator(lag);
    } else {
        throw ValidationError("config: " + path + " has unknown kind '" + kind + "'");
    }
    return r;
}

json recipe_to_json(const CovariateRecipe& r) {
    json node;
    switch (r.kind) {
        case CovariateKind::Intercept:
            node["kind"] = "intercept";
            break;
        case CovariateKind::LinearTrend:
            node["kind"] = "linear-trend";
            if (r.denominator) node["denominator"] = *r.denominator;
            break;
        case CovariateKind::Harmonic:
            node["kind"] = "harmonic";
            node["period"] = r.period;
            break;
        case CovariateKind::External:
            node["kind"] = "external";
            node["column"] = r.column;
            break;
        case CovariateKind::LaggedIndicator:
            node["kind"] = "lagged-indicator";
            node["lag"] = r.lag;
            break;
    }
    return node;
}

std::vector<CovariateRecipe> parse_recipe_list(const json& node, const std::string& path) {
    if (!node.is_array()) throw ValidationError("config: " + path + " must be an array");
    std::vector<CovariateRecipe> out;
    int i = 0;
    for (const auto& item : node) {
        out.push_back(parse_recipe(item, path + "[" + std::to_string(i++) + "]"));
    }
    return out;
}

Eigen::VectorXd parse_vector(const json& node, int expected, const std::string& path) {
    if (!node.is_array()) throw ValidationError("config: " + path + " must be an array");
    if (static_cast<int>(node.size()) != expected) {
        throw ValidationError("config: " + path + " must have length " +
                              std::to_string(expected));
    }
    Eigen::VectorXd v(expected);
    int i = 0;
    for (const auto& item : node) v(i++) = item.get<double>();
    return v;
}

CoefFamily family_from_name(const std::string& name, const std::string& path) {
    if (name == "phi") return CoefFamily::Phi;
    if (name == "theta") return CoefFamily::Theta;
    if (name == "alpha") return CoefFamily::Alpha;
    if (name == "gamma") return CoefFamily::Gamma;
    throw ValidationError("config: unknown key '" + path + "/" + name + "'");
}

std::string family_name(CoefFamily family) {
    switch (family) {
        case CoefFamily::Phi: return "phi";
        case CoefFamily::Theta: return "theta";
        case CoefFamily::Alpha: return "alpha";
        case CoefFamily::Gamma: return "gamma";
    }
    return "?";
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

Dataset load_csv_dataset(const std::string& path, const std::string& y_column,
                         const std::vector<std::string>& covariate_columns) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_csv_dataset: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("load_csv_dataset: empty file");
    const auto header = split_csv_line(line);
    if (header.empty()) throw ValidationError("load_csv_dataset: empty header row");

    int y_idx = -1, t_idx = -1;
    std::vector<std::pair<std::string, int>> wanted;  // (name, column index)
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[static_cast<std::size_t>(i)] == y_column) y_idx = i;
        if (header[static_cast<std::size_t>(i)] == "t") t_idx = i;
    }
    if (y_idx < 0) {
        throw ValidationError("load_csv_dataset: missing column '" + y_column + "'");
    }
    if (covariate_columns.empty()) {
        for (int i = 0; i < static_cast<int>(header.size()); ++i) {
            if (i == y_idx || i == t_idx) continue;
            wanted.emplace_back(header[static_cast<std::size_t>(i)], i);
        }
    } else {
        for (const auto& name : covariate_columns) {
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) {
                throw ValidationError("load_csv_dataset: missing column '" + name + "'");
            }
            wanted.emplace_back(name, static_cast<int>(it - header.begin()));
        }
    }

    Dataset data;
    std::vector<std::vector<double>> cov_values(wanted.size());
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ValidationError("load_csv_dataset: row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        }
        const std::string context = "at row " + std::to_string(row);
        data.y.push_back(parse_count_strict(fields[static_cast<std::size_t>(y_idx)],
                                            "in column '" + y_column + "' " + context));
        if (t_idx >= 0) {
            data.time_index.push_back(static_cast<std::int64_t>(parse_double_strict(
                fields[static_cast<std::size_t>(t_idx)], "in column 't' " + context)));
        }
        for (std::size_t c = 0; c < wanted.size(); ++c) {
            cov_values[c].push_back(
                parse_double_strict(fields[static_cast<std::size_t>(wanted[c].second)],
                                    "in column '" + wanted[c].first + "' " + context));
        }
    }
    if (data.y.empty()) throw ValidationError("load_csv_dataset: no data rows");
    for (std::size_t c = 0; c < wanted.size(); ++c) {
        data.covariates[wanted[c].first] = Eigen::Map<Eigen::VectorXd>(
            cov_values[c].data(), static_cast<Eigen::Index>(cov_values[c].size()));
    }
    data.validate();
    return data;
}

void save_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw ValidationError("save_dataset_csv: cannot open '" + path + "' for writing");
    out << "t,y";
    for (const auto& [name, _] : data.covariates) out << ',' << name;
    out << '\n';
    for (int t = 0; t < data.n(); ++t) {
        const std::int64_t ti = data.time_index.empty()
                                    ? static_cast<std::int64_t>(t + 1)
                                    : data.time_index[static_cast<std::size_t>(t)];
        out << ti << ',' << data.y[static_cast<std::size_t>(t)];
        for (const auto& [_, col] : data.covariates) out << ',' << format_double(col(t));
        out << '\n';
    }
}

ParsedConfig parse_model_config(const std::string& path) {
    return parse_model_config_json(read_json(path), path);
}

ParsedConfig parse_model_config_json(const json& root, const std::string& origin) {
    if (!root.is_object()) throw ValidationError("config: " + origin + " must be a JSON object");
    require_keys(root,
                 {"name", "description", "zero_inflated", "orders", "w_covariates",
                  "m_covariates", "fixed", "estimation", "truth", "simulation", "study"},
                 "");

    ParsedConfig cfg;
    cfg.name = root.value("name", "");
    cfg.spec.zero_inflated = root.value("zero_inflated", true);

    if (root.contains("orders")) {
        const auto& orders = root.at("orders");
        require_keys(orders, {"p1", "q1", "p2", "q2"}, "/orders");
        cfg.spec.p1 = orders.value("p1", 0);
        cfg.spec.q1 = orders.value("q1", 0);
        cfg.spec.p2 = orders.value("p2", 0);
        cfg.spec.q2 = orders.value("q2", 0);
        if (cfg.spec.p1 < 0 || cfg.spec.q1 < 0 || cfg.spec.p2 < 0 || cfg.spec.q2 < 0) {
            throw ValidationError("config: /orders entries must be non-negative");
        }
    }

    if (!root.contains("w_covariates")) {
        throw ValidationError("config: missing required key '/w_covariates'");
    }
    cfg.spec.w_covariates = parse_recipe_list(root.at("w_covariates"), "/w_covariates");
    if (cfg.spec.w_covariates.empty()) {
        throw ValidationError("config: /w_covariates must not be empty");
    }
    if (cfg.spec.zero_inflated) {
        if (!root.contains("m_covariates")) {
            throw ValidationError("config: missing required key '/m_covariates'");
        }
        cfg.spec.m_covariates = parse_recipe_list(root.at("m_covariates"), "/m_covariates");
        if (cfg.spec.m_covariates.empty()) {
            throw ValidationError("config: /m_covariates must not be empty");
        }
    } else if (root.contains("m_covariates") && !root.at("m_covariates").empty()) {
        throw ValidationError("config: /m_covariates must be empty when zero_inflated=false");
    }

    if (root.contains("fixed")) {
        const auto& fixed = root.at("fixed");
        if (!fixed.is_object()) throw ValidationError("config: /fixed must be an object");
        for (const auto& [fam_name, entries] : fixed.items()) {
            const CoefFamily family = family_from_name(fam_name, "/fixed");
            if (!entries.is_array()) {
                throw ValidationError("config: /fixed/" + fam_name + " must be an array");
            }
            int i = 0;
            for (const auto& entry : entries) {
                const std::string path = "/fixed/" + fam_name + "[" + std::to_string(i++) + "]";
                require_keys(entry, {"index", "value"}, path);
                if (!entry.contains("index") || !entry.contains("value")) {
                    throw ValidationError("config: " + path + " requires 'index' and 'value'");
                }
                FixedCoefficient fc;
                fc.family = family;
                fc.index = entry.at("index").get<int>();
                fc.value = entry.at("value").get<double>();
                cfg.spec.fixed.push_back(fc);
            }
        }
    }

    if (root.contains("estimation")) {
        const auto& est = root.at("estimation");
        require_keys(est,
                     {"method", "max_iterations", "em_max_iterations", "step_tolerance",
                      "loglik_tolerance", "em_tolerance", "em_inner_max_iterations",
                      "em_inner_grad_tolerance", "seed"},
                     "/estimation");
        auto& opt = cfg.spec.estimation;
        if (est.contains("method")) {
            const std::string m = est.at("method").get<std::string>();
            if (m == "em") {
                opt.method = FitMethod::Em;
            } else if (m == "nr") {
                opt.method = FitMethod::NewtonRaphson;
            } else {
                throw ValidationError("config: /estimation/method must be 'em' or 'nr'");
            }
        }
        opt.max_iterations = est.value("max_iterations", opt.max_iterations);
        opt.em_max_iterations = est.value("em_max_iterations", opt.em_max_iterations);
        opt.step_tolerance = est.value("step_tolerance", opt.step_tolerance);
        opt.loglik_tolerance = est.value("loglik_tolerance", opt.loglik_tolerance);
        opt.em_tolerance = est.value("em_tolerance", opt.em_tolerance);
        opt.em_inner_max_iterations =
            est.value("em_inner_max_iterations", opt.em_inner_max_iterations);
        opt.em_inner_grad_tolerance =
            est.value("em_inner_grad_tolerance", opt.em_inner_grad_tolerance);
        opt.seed = est.value("seed", opt.seed);
    }

    cfg.spec.validate();

    if (root.contains("truth")) {
        const auto& truth = root.at("truth");
        require_keys(truth, {"beta", "phi", "theta", "delta", "alpha", "gamma", "k"}, "/truth");
        ParameterSet p = cfg.spec.zero_parameters();
        if (truth.contains("beta")) p.beta = parse_vector(truth.at("beta"), cfg.spec.n1(), "/truth/beta");
        if (truth.contains("phi")) p.phi = parse_vector(truth.at("phi"), cfg.spec.p1, "/truth/phi");
        if (truth.contains("theta")) {
            p.theta = parse_vector(truth.at("theta"), cfg.spec.q1, "/truth/theta");
        }
        if (truth.contains("delta")) {
            p.delta = parse_vector(truth.at("delta"), cfg.spec.n2(), "/truth/delta");
        }
        if (truth.contains("alpha")) {
            p.alpha = parse_vector(truth.at("alpha"), cfg.spec.p2, "/truth/alpha");
        }
        if (truth.contains("gamma")) {
            p.gamma = parse_vector(truth.at("gamma"), cfg.spec.q2, "/truth/gamma");
        }
        if (!truth.contains("k")) throw ValidationError("config: /truth requires 'k'");
        p.k = truth.at("k").get<double>();
        ParameterSet pinned = p;
        cfg.spec.apply_fixed(pinned);
        if ((pinned.flatten() - p.flatten()).cwiseAbs().maxCoeff() > 0.0) {
            throw ValidationError("config: /truth conflicts with a fixed coefficient value");
        }
        p.validate();
        cfg.truth = p;
    }

    if (root.contains("simulation")) {
        const auto& sim = root.at("simulation");
        require_keys(sim, {"n"}, "/simulation");
        cfg.simulation.n = sim.value("n", 0);
        if (cfg.simulation.n < 1) throw ValidationError("config: /simulation/n must be >= 1");
    }

    if (root.contains("study")) {
        const auto& study = root.at("study");
        require_keys(study, {"sizes", "replications", "estimator", "seed"}, "/study");
        if (study.contains("sizes")) {
            cfg.study.sample_sizes.clear();
            for (const auto& s : study.at("sizes")) cfg.study.sample_sizes.push_back(s.get<int>());
        }
        cfg.study.replications = study.value("replications", cfg.study.replications);
        if (study.contains("estimator")) {
            const std::string e = study.at("estimator").get<std::string>();
            if (e == "em") {
                cfg.study.estimator = StudyEstimator::Em;
            } else if (e == "nr") {
                cfg.study.estimator = StudyEstimator::NewtonRaphson;
            } else if (e == "both") {
                cfg.study.estimator = StudyEstimator::Both;
            } else {
                throw ValidationError("config: /study/estimator must be 'em', 'nr', or 'both'");
            }
        }
        cfg.study.seed = study.value("seed", cfg.study.seed);
    }

    return cfg;
}

json config_to_json(const ParsedConfig& cfg) {
    json root;
    if (!cfg.name.empty()) root["name"] = cfg.name;
    root["zero_inflated"] = cfg.spec.zero_inflated;
    root["orders"] = {{"p1", cfg.spec.p1}, {"q1", cfg.spec.q1}, {"p2", cfg.spec.p2},
                      {"q2", cfg.spec.q2}};
    json w = json::array();
    for (const auto& r : cfg.spec.w_covariates) w.push_back(recipe_to_json(r));
    root["w_covariates"] = w;
    if (cfg.spec.zero_inflated) {
        json m = json::array();
        for (const auto& r : cfg.spec.m_covariates) m.push_back(recipe_to_json(r));
        root["m_covariates"] = m;
    }
    if (!cfg.spec.fixed.empty()) {
        json fixed;
        for (const auto& f : cfg.spec.fixed) {
            fixed[family_name(f.family)].push_back({{"index", f.index}, {"value", f.value}});
        }
        root["fixed"] = fixed;
    }
    const auto& opt = cfg.spec.estimation;
    root["estimation"] = {
        {"method", opt.method == FitMethod::Em ? "em" : "nr"},
        {"max_iterations", opt.max_iterations},
        {"em_max_iterations", opt.em_max_iterations},
        {"step_tolerance", opt.step_tolerance},
        {"loglik_tolerance", opt.loglik_tolerance},
        {"em_tolerance", opt.em_tolerance},
        {"em_inner_max_iterations", opt.em_inner_max_iterations},
        {"em_inner_grad_tolerance", opt.em_inner_grad_tolerance},
        {"seed", opt.seed},
    };
    if (cfg.truth) {
        root["truth"] = {
            {"beta", vector_to_json(cfg.truth->beta)},   {"phi", vector_to_json(cfg.truth->phi)},
            {"theta", vector_to_json(cfg.truth->theta)}, {"delta", vector_to_json(cfg.truth->delta)},
            {"alpha", vector_to_json(cfg.truth->alpha)}, {"gamma", vector_to_json(cfg.truth->gamma)},
            {"k", cfg.truth->k},
        };
    }
    if (cfg.simulation.n > 0) root["simulation"] = {{"n", cfg.simulation.n}};
    root["study"] = {
        {"sizes", cfg.study.sample_sizes},
        {"replications", cfg.study.replications},
        {"estimator", cfg.study.estimator == StudyEstimator::Em            ? "em"
                      : cfg.study.estimator == StudyEstimator::NewtonRaphson ? "nr"
                                                                             : "both"},
        {"seed", cfg.study.seed},
    };
    return root;
}

json make_run_report(const ParsedConfig& config, const Dataset& data, const FitResult& fit,
                     const GofSummary& gof, std::uint64_t seed) {
    json report;
    report["tool"] = {{"name", "zinbarma"}, {"version", kVersion}};
    report["seed"] = seed;
    report["timestamp"] = iso_timestamp();
    report["config"] = config_to_json(config);

    std::int64_t y_sum = 0;
    for (auto v : data.y) y_sum += v;
    report["data"] = {{"n_obs", data.n()},
                      {"zero_fraction", data.zero_fraction()},
                      {"y_sum", y_sum}};

    json fit_block;
    fit_block["method"] = fit.method == FitMethod::Em ? "em" : "nr";
    fit_block["converged"] = fit.converged;
    fit_block["iterations"] = fit.iterations;
    fit_block["loglik"] = fit.loglik;
    fit_block["n_params"] = fit.n_params;
    fit_block["n_obs"] = fit.n_obs;
    fit_block["parameters"] = {
        {"beta", vector_to_json(fit.params.beta)},   {"phi", vector_to_json(fit.params.phi)},
        {"theta", vector_to_json(fit.params.theta)}, {"delta", vector_to_json(fit.params.delta)},
        {"alpha", vector_to_json(fit.params.alpha)}, {"gamma", vector_to_json(fit.params.gamma)},
        {"k", fit.params.k},
    };

    json estimates = json::array();
    const Eigen::VectorXd est = fit.estimates();
    for (int i = 0; i < static_cast<int>(fit.free_names.size()); ++i) {
        json row;
        row["name"] = fit.free_names[static_cast<std::size_t>(i)];
        row["estimate"] = est(i);
        if (fit.cov_valid) {
            const double se = fit.se(i);
            row["std_error"] = se;
            const double z = se > 0.0 ? est(i) / se : 0.0;
            row["z"] = z;
            row["p_value"] = 2.0 * (1.0 - stats::normal_cdf(std::abs(z)));
            row["ci_lower"] = est(i) - 1.96 * se;
            row["ci_upper"] = est(i) + 1.96 * se;
        } else {
            row["std_error"] = nullptr;
            row["z"] = nullptr;
            row["p_value"] = nullptr;
            row["ci_lower"] = nullptr;
            row["ci_upper"] = nullptr;
        }
        estimates.push_back(row);
    }
    fit_block["estimates"] = estimates;

    if (fit.cov_valid) {
        json cov = json::array();
        for (int i = 0; i < fit.cov.rows(); ++i) {
            json covrow = json::array();
            for (int j = 0; j < fit.cov.cols(); ++j) covrow.push_back(fit.cov(i, j));
            cov.push_back(covrow);
        }
        fit_block["covariance"] = cov;
    } else {
        fit_block["covariance"] = nullptr;
    }
    fit_block["trace"] = fit.trace;
    fit_block["warnings"] = fit.warnings;
    report["fit"] = fit_block;

    report["gof"] = {
        {"mse", gof.mse},       {"mad", gof.mad},  {"pearson_chi2", gof.pearson_chi2},
        {"deviance", gof.deviance}, {"df", gof.df}, {"aic", gof.aic},
        {"bic", gof.bic},       {"loglik", gof.loglik}, {"n_params", gof.n_params},
        {"n_obs", gof.n_obs},
    };
    // SEs for k come from the joint observed information; the supporting
    // asymptotics assume known k, so mark them as heuristic.
    report["notes"] = {{"k_se_heuristic", true}};
    return report;
}

LoadedReport load_run_report(const std::string& path) {
    LoadedReport out;
    out.raw = read_json(path);
    if (!out.raw.contains("config") || !out.raw.contains("fit")) {
        throw ValidationError("load_run_report: '" + path + "' is not a run report");
    }
    out.config = parse_model_config_json(out.raw.at("config"), path + "#/config");
    const auto& params = out.raw.at("fit").at("parameters");
    ParameterSet p;
    p.beta = parse_vector(params.at("beta"), out.config.spec.n1(), "fit/parameters/beta");
    p.phi = parse_vector(params.at("phi"), out.config.spec.p1, "fit/parameters/phi");
    p.theta = parse_vector(params.at("theta"), out.config.spec.q1, "fit/parameters/theta");
    p.delta = parse_vector(params.at("delta"), out.config.spec.n2(), "fit/parameters/delta");
    p.alpha = parse_vector(params.at("alpha"), out.config.spec.p2, "fit/parameters/alpha");
    p.gamma = parse_vector(params.at("gamma"), out.config.spec.q2, "fit/parameters/gamma");
    p.k = params.at("k").get<double>();
    p.validate();
    out.params = p;
    return out;
}

void write_json(const std::string& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_json: cannot open '" + path + "' for writing");
    out << value.dump(2) << '\n';
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_json: cannot open '" + path + "'");
    json value;
    try {
        in >> value;
    } catch (const json::parse_error& err) {
        throw ValidationError("read_json: '" + path + "': " + err.what());
    }
    return value;
}

}  // namespace zinb
