#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace optday {

// Row-major numeric table with named columns.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::size_t n_rows = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    explicit FeatureMatrix(std::vector<std::string> column_names)
        : names(std::move(column_names)) {}

    std::size_t n_cols() const { return names.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * n_cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * n_cols() + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_cols(), n_cols()};
    }
    void add_row(std::span<const double> row);
};

}  // namespace optday
