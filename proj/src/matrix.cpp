#include "optday/matrix.hpp"

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

void FeatureMatrix::add_row(std::span<const double> row) {
    if (row.size() != n_cols()) {
        throw InvalidArgument(
            fmt::format("row has {} values, matrix has {} columns", row.size(), n_cols()));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++n_rows;
}

}  // namespace optday
