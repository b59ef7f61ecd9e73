#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace optday {

inline constexpr double kMapeEpsilon = 1e-5;

struct MetricsBundle {
    double rmse = 0.0;
    double mae = 0.0;
    // Empty when the actuals are constant and R^2 is undefined.
    std::optional<double> r2;
    double mape_percent = 0.0;
    std::size_t n = 0;
};

// RMSE, MAE, R^2 = 1 - SSE/SST and MAPE = 100/N * sum |(y - yhat) / (y + eps)|,
// all on the scale of the inputs. Throws InvalidArgument on length mismatch,
// fewer than two rows, negative actuals or non-finite values.
MetricsBundle compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                              double epsilon = kMapeEpsilon);

}  // namespace optday
