#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zinb {

/// Observed count series plus named covariate columns, aligned by time index.
struct Dataset {
    std::vector<std::int64_t> y;                   // counts, length N
    std::map<std::string, Eigen::VectorXd> covariates;
    std::vector<std::int64_t> time_index;          // optional; empty or length N

    [[nodiscard]] int n() const { return static_cast<int>(y.size()); }

    [[nodiscard]] double zero_fraction() const;

    [[nodiscard]] Eigen::VectorXd y_as_double() const;

    /// Throws ValidationError on negative counts, non-finite covariates, or
    /// column length mismatches.
    void validate() const;
};

}  // namespace zinb
