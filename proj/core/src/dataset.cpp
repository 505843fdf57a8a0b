#include "zinbarma/dataset.hpp"

#include <cmath>

#include "zinbarma/errors.hpp"

namespace zinb {

double Dataset::zero_fraction() const {
    if (y.empty()) return 0.0;
    std::size_t zeros = 0;
    for (auto v : y) {
        if (v == 0) ++zeros;
    }
    return static_cast<double>(zeros) / static_cast<double>(y.size());
}

Eigen::VectorXd Dataset::y_as_double() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) out(static_cast<Eigen::Index>(i)) =
        static_cast<double>(y[i]);
    return out;
}

void Dataset::validate() const {
    const auto n = static_cast<Eigen::Index>(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0) {
            throw ValidationError("Dataset: negative count at row " + std::to_string(i + 1));
        }
    }
    for (const auto& [name, col] : covariates) {
        if (col.size() != n) {
            throw ValidationError("Dataset: column '" + name + "' length mismatch");
        }
        if (!col.allFinite()) {
            throw ValidationError("Dataset: non-finite value in column '" + name + "'");
        }
    }
    if (!time_index.empty() && static_cast<Eigen::Index>(time_index.size()) != n) {
        throw ValidationError("Dataset: time index length mismatch");
    }
}

}  // namespace zinb
