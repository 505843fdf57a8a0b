#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zinbarma/dataset.hpp"
#include "zinbarma/diagnostics.hpp"
#include "zinbarma/estimation.hpp"
#include "zinbarma/model.hpp"
#include "zinbarma/simulation.hpp"

namespace zinb {

/// Loads a CSV with a header row. `y_column` must hold non-negative integer
/// counts; `covariate_columns` names the columns to keep as covariates (empty
/// means every numeric column except y and t). Missing cells are errors; no
/// imputation. A `t` column, when present, is kept as the time index.
Dataset load_csv_dataset(const std::string& path, const std::string& y_column = "y",
                         const std::vector<std::string>& covariate_columns = {});

/// Writes t, y, and covariate columns with round-trippable float formatting.
void save_dataset_csv(const std::string& path, const Dataset& data);

struct StudyOptions {
    std::vector<int> sample_sizes{30, 100, 500};
    int replications = 1000;
    StudyEstimator estimator = StudyEstimator::Em;
    std::uint64_t seed = 20240601;
};

struct SimulationOptions {
    int n = 0;  // series length; required for the simulate command
};

/// Fully resolved model configuration (defaults applied).
struct ParsedConfig {
    std::string name;
    ModelSpec spec;
    std::optional<ParameterSet> truth;
    StudyOptions study;
    SimulationOptions simulation;
};

/// Strict JSON config parser: unknown keys anywhere are errors, reported with
/// their key path.
ParsedConfig parse_model_config(const std::string& path);
ParsedConfig parse_model_config_json(const nlohmann::json& root, const std::string& origin);

/// Serializes the resolved config back to JSON (used for the report echo).
nlohmann::json config_to_json(const ParsedConfig& config);

/// Machine-readable run report: config echo, data fingerprint, estimate table
/// with standard errors and p-values, goodness-of-fit block, warnings.
nlohmann::json make_run_report(const ParsedConfig& config, const Dataset& data,
                               const FitResult& fit, const GofSummary& gof,
                               std::uint64_t seed);

/// Reconstructs the fitted model from a report (parameters, spec) so
/// diagnostics can run without refitting.
struct LoadedReport {
    ParsedConfig config;
    ParameterSet params;
    nlohmann::json raw;
};
LoadedReport load_run_report(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& value);
nlohmann::json read_json(const std::string& path);

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace zinb
