#include "optday/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

MetricsBundle compute_metrics(std::span<const double> actual, std::span<const double> predicted,
                              double epsilon) {
    if (actual.size() != predicted.size()) {
        throw InvalidArgument(fmt::format("metrics: {} actuals but {} predictions", actual.size(),
                                          predicted.size()));
    }
    const std::size_t n = actual.size();
    if (n < 2) throw InvalidArgument("metrics need at least two rows (R^2 undefined)");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i])) {
            throw InvalidArgument(fmt::format("metrics: non-finite value at row {}", i));
        }
        if (actual[i] < 0.0) {
            throw InvalidArgument(fmt::format("metrics: negative actual {} at row {}", actual[i], i));
        }
        mean += actual[i];
    }
    mean /= static_cast<double>(n);

    double sse = 0.0, sae = 0.0, sst = 0.0, ape = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err = actual[i] - predicted[i];
        sse += err * err;
        sae += std::abs(err);
        sst += (actual[i] - mean) * (actual[i] - mean);
        ape += std::abs(err / (actual[i] + epsilon));
    }
    const double nn = static_cast<double>(n);
    MetricsBundle m;
    m.n = n;
    m.rmse = std::sqrt(sse / nn);
    m.mae = sae / nn;
    if (sst > 0.0) m.r2 = 1.0 - sse / sst;
    m.mape_percent = 100.0 * ape / nn;
    return m;
}

}  // namespace optday
