// zinbarma: simulate, fit, diagnose, and compare zero-inflated NB-ARMA
// count time series models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zinbarma/diagnostics.hpp"
#include "zinbarma/errors.hpp"
#include "zinbarma/estimation.hpp"
#include "zinbarma/io.hpp"
#include "zinbarma/polynomial.hpp"
#include "zinbarma/simulation.hpp"
#include "zinbarma/stats.hpp"
#include "zinbarma/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zinb;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

void warn_on_ma_roots(const ParameterSet& params) {
    const auto check = [](const char* label, const Eigen::VectorXd& coeffs) {
        const RootCheck rc = check_polynomial_roots(coeffs, PolynomialKind::Ma);
        if (!rc.ok) {
            std::cerr << "warning: " << label
                      << " MA polynomial is non-invertible (min root modulus "
                      << rc.min_root_modulus << "); simulation proceeds\n";
        }
    };
    check("log-mean", params.theta);
    check("logit", params.gamma);
}

Dataset covariate_shell(const ParsedConfig& cfg, int n, const std::string& covariate_csv) {
    Dataset shell;
    if (!covariate_csv.empty()) {
        shell = load_csv_dataset(covariate_csv, "y");
        if (shell.n() != n) {
            throw ValidationError("covariate file has " + std::to_string(shell.n()) +
                                  " rows, expected " + std::to_string(n));
        }
        return shell;
    }
    for (const auto& recipes : {cfg.spec.w_covariates, cfg.spec.m_covariates}) {
        for (const auto& r : recipes) {
            if (!r.data_free()) {
                throw ValidationError(
                    "config uses data-dependent covariates; supply --covariates CSV");
            }
        }
    }
    shell.y.assign(static_cast<std::size_t>(n), 0);
    return shell;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// ------------------------------------------------------------------ simulate
int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::uint64_t seed, int n_override, const std::string& covariate_csv) {
    const ParsedConfig cfg = parse_model_config(config_path);
    if (!cfg.truth) throw ValidationError("config has no 'truth' block to simulate from");
    const int n = n_override > 0 ? n_override : cfg.simulation.n;
    if (n <= 0) throw ValidationError("series length not set; add simulation.n or pass --n");

    Dataset shell = covariate_shell(cfg, n, covariate_csv);
    const Eigen::MatrixXd X = build_design(cfg.spec.w_covariates, shell);
    const Eigen::MatrixXd U = cfg.spec.zero_inflated
                                  ? build_design(cfg.spec.m_covariates, shell)
                                  : Eigen::MatrixXd::Zero(n, 0);
    warn_on_ma_roots(*cfg.truth);
    shell.y = simulate_series(*cfg.truth, X, U, seed);
    save_dataset_csv(out_path, shell);
    std::int64_t zeros = 0;
    for (auto v : shell.y) zeros += v == 0 ? 1 : 0;
    std::cout << "wrote " << out_path << " (n=" << n << ", zero fraction "
              << static_cast<double>(zeros) / n << ")\n";
    return 0;
}

// ----------------------------------------------------------------------- fit
int cmd_fit(const std::string& data_path, const std::string& config_path,
            const std::string& method, const std::string& report_path) {
    ParsedConfig cfg = parse_model_config(config_path);
    if (method == "nr") {
        cfg.spec.estimation.method = FitMethod::NewtonRaphson;
    } else if (method == "em") {
        cfg.spec.estimation.method = FitMethod::Em;
    } else if (!method.empty()) {
        throw ValidationError("--method must be 'nr' or 'em'");
    }
    const Dataset data = load_csv_dataset(data_path);
    const ParameterSet init = initialize(data, cfg.spec);
    const FitResult fit = cfg.spec.estimation.method == FitMethod::Em
                              ? fit_em(data, cfg.spec, init)
                              : fit_newton_raphson(data, cfg.spec, init);
    const GofSummary gof = gof_summary(fit, data);
    const json report = make_run_report(cfg, data, fit, gof, cfg.spec.estimation.seed);
    write_json(report_path, report);

    // estimates table next to the report
    const fs::path csv_path = fs::path(report_path).replace_extension(".estimates.csv");
    std::vector<std::vector<std::string>> rows;
    const Eigen::VectorXd est = fit.estimates();
    for (int i = 0; i < est.size(); ++i) {
        std::vector<std::string> row{fit.free_names[static_cast<std::size_t>(i)],
                                     format_double(est(i))};
        if (fit.cov_valid) {
            const double se = fit.se(i);
            const double z = se > 0.0 ? est(i) / se : 0.0;
            row.push_back(format_double(se));
            row.push_back(format_double(2.0 * (1.0 - stats::normal_cdf(std::abs(z)))));
        } else {
            row.emplace_back();
            row.emplace_back();
        }
        rows.push_back(std::move(row));
    }
    write_csv(csv_path.string(), {"parameter", "estimate", "std_error", "p_value"}, rows);

    std::cout << "method=" << (fit.method == FitMethod::Em ? "em" : "nr")
              << " converged=" << (fit.converged ? "yes" : "no") << " iterations="
              << fit.iterations << " loglik=" << fit.loglik << " aic=" << gof.aic
              << " bic=" << gof.bic << "\n";
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << report_path << " and " << csv_path.string() << "\n";
    return fit.converged ? 0 : kExitNumerical;
}

// ------------------------------------------------------------------ diagnose
int cmd_diagnose(const std::string& report_path, const std::string& data_path,
                 const std::string& out_dir, std::uint64_t seed, bool midpoint) {
    const LoadedReport loaded = load_run_report(report_path);
    const Dataset data = load_csv_dataset(data_path);
    const FitResult fit = evaluate_at(data, loaded.config.spec, loaded.params);
    fs::create_directories(out_dir);
    const auto path = [&out_dir](const char* name) {
        return (fs::path(out_dir) / name).string();
    };

    const Eigen::VectorXd rqr = randomized_quantile_residuals(fit, data, seed, midpoint);
    {
        std::vector<std::vector<std::string>> rows;
        for (int t = 0; t < data.n(); ++t) {
            const double pearson =
                (static_cast<double>(data.y[static_cast<std::size_t>(t)]) -
                 fit.trajectory.cond_mean(t)) /
                std::sqrt(fit.trajectory.cond_var(t));
            rows.push_back({std::to_string(t + 1),
                            std::to_string(data.y[static_cast<std::size_t>(t)]),
                            format_double(fit.trajectory.cond_mean(t)),
                            format_double(pearson), format_double(rqr(t))});
        }
        write_csv(path("residuals.csv"), {"t", "y", "fitted_mean", "pearson", "quantile"},
                  rows);
    }

    const int max_lag = std::min(20, data.n() / 4);
    const AcfResult acf = acf_pacf(rqr, max_lag);
    {
        std::vector<std::vector<std::string>> rows;
        for (int h = 1; h <= max_lag; ++h) {
            rows.push_back({std::to_string(h), format_double(acf.acf(h)),
                            format_double(acf.pacf(h - 1))});
        }
        write_csv(path("acf_pacf.csv"), {"lag", "acf", "pacf"}, rows);
    }

    const LjungBoxResult lb =
        ljung_box(rqr, std::min(10, max_lag), loaded.config.spec.p1 + loaded.config.spec.q1);
    const double p0 = excess_zero_probability(fit, data);
    if (p0 < 0.0) {
        std::cerr << "warning: negative excess-zero probability (NB part over-predicts zeros)\n";
    }

    {
        std::vector<std::vector<std::string>> rows;
        Eigen::VectorXd sorted = rqr;
        std::sort(sorted.data(), sorted.data() + sorted.size());
        for (int i = 0; i < sorted.size(); ++i) {
            const double q = stats::normal_quantile((i + 0.5) / static_cast<double>(sorted.size()));
            rows.push_back({format_double(q), format_double(sorted(i))});
        }
        write_csv(path("qq.csv"), {"theoretical", "sample"}, rows);
    }

    {
        const std::vector<double> thresholds{0.4, 0.5, 0.6};
        const auto table = zero_classification_table(fit, data, thresholds);
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : table) {
            rows.push_back({format_double(row.threshold),
                            row.sensitivity ? format_double(*row.sensitivity) : "",
                            row.specificity ? format_double(*row.specificity) : ""});
        }
        write_csv(path("sensitivity.csv"), {"threshold", "sensitivity", "specificity"}, rows);
    }

    json summary;
    summary["ljung_box"] = {{"statistic", lb.statistic}, {"df", lb.df}, {"p_value", lb.p_value}};
    summary["excess_zero_probability"] = p0;
    summary["seed"] = seed;
    summary["midpoint_mode"] = midpoint;
    const auto ks = stats::ks_test_standard_normal(rqr);
    summary["quantile_residual_ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
    write_json(path("diagnostics.json"), summary);

    std::cout << "wrote diagnostics to " << out_dir << " (Ljung-Box p=" << lb.p_value
              << ", excess-zero p0=" << p0 << ")\n";
    return 0;
}

// ------------------------------------------------------------------ mc-study
int cmd_mc_study(const std::string& config_path, int reps_override,
                 const std::vector<int>& sizes_override, const std::string& out_dir,
                 std::uint64_t seed_override, bool have_seed) {
    const ParsedConfig cfg = parse_model_config(config_path);
    if (!cfg.truth) throw ValidationError("config has no 'truth' block for the study");
    McStudyConfig study;
    study.spec = cfg.spec;
    study.truth = *cfg.truth;
    study.sample_sizes = sizes_override.empty() ? cfg.study.sample_sizes : sizes_override;
    study.replications = reps_override > 0 ? reps_override : cfg.study.replications;
    study.estimator = cfg.study.estimator;
    study.seed = have_seed ? seed_override : cfg.study.seed;

    fs::create_directories(out_dir);
    const auto cells = run_mc_study(study);

    json index;
    index["config"] = config_to_json(cfg);
    index["replications"] = study.replications;
    index["seed"] = study.seed;
    json cell_list = json::array();

    for (const auto& cell : cells) {
        const std::string method = cell.method == FitMethod::Em ? "em" : "nr";
        const std::string base =
            "mc_N" + std::to_string(cell.sample_size) + "_" + method;
        {
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : cell.parameters) {
                rows.push_back({p.name, format_double(p.true_value),
                                format_double(p.mean_estimate), opt_str(p.se_of_mean),
                                format_double(p.abs_bias), opt_str(p.ci_lower),
                                opt_str(p.ci_upper)});
            }
            write_csv((fs::path(out_dir) / (base + "_summary.csv")).string(),
                      {"parameter", "true", "est", "se", "abs_bias", "ci_lower", "ci_upper"},
                      rows);
        }
        {
            std::vector<std::string> header;
            for (const auto& p : cell.parameters) header.push_back(p.name);
            std::vector<std::vector<std::string>> rows;
            for (int r = 0; r < cell.estimates.rows(); ++r) {
                std::vector<std::string> row;
                for (int j = 0; j < cell.estimates.cols(); ++j) {
                    row.push_back(format_double(cell.estimates(r, j)));
                }
                rows.push_back(std::move(row));
            }
            write_csv((fs::path(out_dir) / (base + "_estimates.csv")).string(), header, rows);
        }
        // QQ export for replicates with usable standard errors
        {
            std::vector<int> usable;
            for (int r = 0; r < cell.ses.rows(); ++r) {
                if (cell.ses.row(r).allFinite() && (cell.ses.row(r).array() > 0.0).all()) {
                    usable.push_back(r);
                }
            }
            if (usable.size() >= 20) {
                Eigen::MatrixXd est(usable.size(), cell.estimates.cols());
                Eigen::MatrixXd ses(usable.size(), cell.ses.cols());
                Eigen::VectorXd truth(static_cast<Eigen::Index>(cell.parameters.size()));
                for (std::size_t i = 0; i < usable.size(); ++i) {
                    est.row(static_cast<Eigen::Index>(i)) = cell.estimates.row(usable[i]);
                    ses.row(static_cast<Eigen::Index>(i)) = cell.ses.row(usable[i]);
                }
                for (std::size_t j = 0; j < cell.parameters.size(); ++j) {
                    truth(static_cast<Eigen::Index>(j)) = cell.parameters[j].true_value;
                }
                const auto qq = estimator_qq_data(est, truth, ses);
                std::vector<std::string> header;
                for (const auto& p : cell.parameters) {
                    header.push_back(p.name + ":theoretical");
                    header.push_back(p.name + ":sample");
                }
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < usable.size(); ++i) {
                    std::vector<std::string> row;
                    for (const auto& pts : qq) {
                        row.push_back(format_double(pts[i].theoretical));
                        row.push_back(format_double(pts[i].sample));
                    }
                    rows.push_back(std::move(row));
                }
                write_csv((fs::path(out_dir) / (base + "_qq.csv")).string(), header, rows);
            }
        }
        cell_list.push_back({{"sample_size", cell.sample_size},
                             {"method", method},
                             {"attempted", cell.attempted},
                             {"converged", cell.converged},
                             {"valid", cell.valid}});
        std::cout << "N=" << cell.sample_size << " " << method << ": " << cell.converged << "/"
                  << cell.attempted << " converged" << (cell.valid ? "" : " [INVALID]") << "\n";
        if (!cell.valid) {
            std::cerr << "warning: more than 20% of replicates failed at N="
                      << cell.sample_size << "; study cell flagged invalid\n";
        }
    }
    index["cells"] = cell_list;
    write_json((fs::path(out_dir) / "study.json").string(), index);
    std::cout << "wrote study tables to " << out_dir << "\n";
    return 0;
}

// ------------------------------------------------------------------- compare
bool is_nested(const ModelSpec& small, const ModelSpec& big) {
    if (small.zero_inflated != big.zero_inflated) return false;
    if (small.w_covariates != big.w_covariates) return false;
    if (small.m_covariates != big.m_covariates) return false;
    if (small.p1 > big.p1 || small.q1 > big.q1 || small.p2 > big.p2 || small.q2 > big.q2) {
        return false;
    }
    // every free slot of the small model must remain free in the big model
    for (const auto& f : big.fixed) {
        const int small_order = f.family == CoefFamily::Phi     ? small.p1
                                : f.family == CoefFamily::Theta ? small.q1
                                : f.family == CoefFamily::Alpha ? small.p2
                                                                : small.q2;
        if (f.index <= small_order) {
            bool also_fixed_in_small = false;
            for (const auto& g : small.fixed) {
                if (g.family == f.family && g.index == f.index && g.value == f.value) {
                    also_fixed_in_small = true;
                }
            }
            if (!also_fixed_in_small) return false;
        }
    }
    return true;
}

bool is_vuong_pair(const ModelSpec& zi, const ModelSpec& nb) {
    return zi.zero_inflated && !nb.zero_inflated && zi.w_covariates == nb.w_covariates &&
           zi.p1 == nb.p1 && zi.q1 == nb.q1;
}

int cmd_compare(const std::string& data_path, const std::vector<std::string>& config_paths,
                const std::string& out_path) {
    if (config_paths.size() < 2) throw ValidationError("compare needs at least two configs");
    const Dataset data = load_csv_dataset(data_path);

    struct Entry {
        std::string name;
        ParsedConfig cfg;
        FitResult fit;
        GofSummary gof;
    };
    std::vector<Entry> entries;
    for (const auto& path : config_paths) {
        Entry e;
        e.cfg = parse_model_config(path);
        e.name = e.cfg.name.empty() ? fs::path(path).stem().string() : e.cfg.name;
        const ParameterSet init = initialize(data, e.cfg.spec);
        e.fit = e.cfg.spec.estimation.method == FitMethod::Em
                    ? fit_em(data, e.cfg.spec, init)
                    : fit_newton_raphson(data, e.cfg.spec, init);
        if (!e.fit.converged) {
            std::cerr << "warning: fit for '" << e.name << "' did not converge\n";
        }
        e.gof = gof_summary(e.fit, data);
        entries.push_back(std::move(e));
    }

    // comparison table in input order
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : entries) {
        rows.push_back({e.name, std::to_string(e.gof.n_params), format_double(e.gof.mse),
                        format_double(e.gof.pearson_chi2), std::to_string(e.gof.df),
                        format_double(e.gof.deviance), format_double(e.gof.aic),
                        format_double(e.gof.bic), format_double(e.gof.mad),
                        format_double(e.gof.loglik)});
    }
    write_csv(out_path,
              {"model", "n_params", "mse", "pearson_chi2", "df", "deviance", "aic", "bic",
               "mad", "loglik"},
              rows);

    json tests;
    tests["lrt"] = json::array();
    tests["vuong"] = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (i == j) continue;
            const auto& a = entries[i];
            const auto& b = entries[j];
            if (a.gof.n_params < b.gof.n_params && is_nested(a.cfg.spec, b.cfg.spec)) {
                try {
                    const auto lrt = likelihood_ratio_test(a.fit, b.fit);
                    tests["lrt"].push_back({{"small", a.name},
                                            {"big", b.name},
                                            {"statistic", lrt.statistic},
                                            {"df", lrt.df},
                                            {"p_value", lrt.p_value}});
                } catch (const NumericalError& err) {
                    std::cerr << "warning: LRT " << a.name << " vs " << b.name << ": "
                              << err.what() << "\n";
                }
            }
            if (is_vuong_pair(a.cfg.spec, b.cfg.spec)) {
                try {
                    const auto v = vuong_test(a.fit, b.fit, data);
                    tests["vuong"].push_back({{"zinb", a.name},
                                              {"nb", b.name},
                                              {"z", v.z},
                                              {"p_value", v.p_value}});
                } catch (const NumericalError& err) {
                    std::cerr << "warning: Vuong " << a.name << " vs " << b.name << ": "
                              << err.what() << "\n";
                }
            }
        }
    }
    const std::string tests_path = out_path + ".tests.json";
    write_json(tests_path, tests);
    std::cout << "wrote " << out_path << " and " << tests_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-inflated negative binomial ARMA modeling for count time series"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a series from a config's truth block");
    std::string sim_config, sim_out, sim_covariates;
    std::uint64_t sim_seed = 1;
    int sim_n = 0;
    sim->add_option("--config", sim_config, "model config JSON")->required();
    sim->add_option("--out", sim_out, "output dataset CSV")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--n", sim_n, "series length (overrides simulation.n)");
    sim->add_option("--covariates", sim_covariates, "CSV supplying external covariate columns");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to a dataset");
    std::string fit_data, fit_config, fit_method, fit_report = "report.json";
    fit_cmd->add_option("--data", fit_data, "dataset CSV")->required();
    fit_cmd->add_option("--config", fit_config, "model config JSON")->required();
    fit_cmd->add_option("--method", fit_method, "nr or em (overrides config)");
    fit_cmd->add_option("--report", fit_report, "output report JSON path");

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "residual diagnostics for a fitted report");
    std::string diag_report, diag_data, diag_out = "diagnostics";
    std::uint64_t diag_seed = 1;
    bool diag_midpoint = false;
    diag->add_option("--report", diag_report, "run report JSON from 'fit'")->required();
    diag->add_option("--data", diag_data, "dataset CSV")->required();
    diag->add_option("--out", diag_out, "output directory");
    diag->add_option("--seed", diag_seed, "seed for randomized quantile residuals");
    diag->add_flag("--midpoint", diag_midpoint, "deterministic midpoint residual mode");

    // mc-study
    auto* mc = app.add_subcommand("mc-study", "Monte Carlo simulate-and-refit study");
    std::string mc_config, mc_out = "mc_study";
    int mc_reps = 0;
    std::vector<int> mc_sizes;
    std::uint64_t mc_seed = 0;
    mc->add_option("--config", mc_config, "model config JSON with a truth block")->required();
    mc->add_option("--reps", mc_reps, "replications (overrides config)");
    mc->add_option("--sizes", mc_sizes, "sample sizes (overrides config)")->delimiter(',');
    mc->add_option("--out", mc_out, "output directory");
    const auto mc_seed_opt = mc->add_option("--seed", mc_seed, "master seed (overrides config)");

    // compare
    auto* cmp = app.add_subcommand("compare", "fit several configs and tabulate fit metrics");
    std::string cmp_data, cmp_out = "comparison.csv";
    std::vector<std::string> cmp_configs;
    cmp->add_option("--data", cmp_data, "dataset CSV")->required();
    cmp->add_option("--configs", cmp_configs, "config JSON paths")->required()->delimiter(',');
    cmp->add_option("--out", cmp_out, "output comparison CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_seed, sim_n, sim_covariates);
        if (fit_cmd->parsed()) return cmd_fit(fit_data, fit_config, fit_method, fit_report);
        if (diag->parsed()) return cmd_diagnose(diag_report, diag_data, diag_out, diag_seed,
                                                diag_midpoint);
        if (mc->parsed()) return cmd_mc_study(mc_config, mc_reps, mc_sizes, mc_out, mc_seed,
                                              mc_seed_opt->count() > 0);
        if (cmp->parsed()) return cmd_compare(cmp_data, cmp_configs, cmp_out);
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
