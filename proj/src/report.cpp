#include <sstream>

#include <fmt/format.h>

#include "optday/csv.hpp"
#include "optday/error.hpp"
#include "optday/pipeline.hpp"

namespace optday {

namespace {

std::string num(double v) { return fmt::format("{:.6f}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); }

std::vector<std::string> metrics_row(int day, std::string_view split,
                                     const std::optional<MetricsBundle>& m,
                                     std::size_t dropped) {
    if (!m) return {std::to_string(day), std::string(split), "", "", "", "", "0",
                    std::to_string(dropped)};
    return {std::to_string(day), std::string(split), num(m->rmse), num(m->mae), num(m->r2),
            num(m->mape_percent), std::to_string(m->n), std::to_string(dropped)};
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, std::span<const DayResult> days) {
    csv::Writer w(path);
    w.row({"day", "split", "rmse", "mae", "r2", "mape", "n", "dropped_rows"});
    for (const DayResult& d : days) {
        if (d.skipped) {
            w.row({std::to_string(d.day), "skipped", "", "", "", "", "0",
                   std::to_string(d.dropped_rows)});
            continue;
        }
        w.row(metrics_row(d.day, "validation", d.validation, d.dropped_rows));
        w.row(metrics_row(d.day, "test", d.test, d.dropped_rows));
    }
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report) {
    csv::Writer w(path);
    std::vector<std::string> header{"metric", "baseline"};
    for (const auto& e : report.days) header.push_back(fmt::format("day_{}", e.day));
    w.row(header);

    auto metric_rows = [&](std::string_view name, std::string_view change_name, auto value,
                           auto change) {
        std::vector<std::string> values{std::string(name), num(value(report.baseline))};
        std::vector<std::string> changes{std::string(change_name), ""};
        for (const auto& e : report.days) {
            values.push_back(num(value(e.metrics)));
            changes.push_back(num(change(e.change)));
        }
        w.row(values);
        w.row(changes);
    };
    metric_rows("rmse", "rmse_pct_reduction", [](const MetricsBundle& m) { return m.rmse; },
                [](const PercentChange& c) { return c.rmse; });
    metric_rows("mae", "mae_pct_reduction", [](const MetricsBundle& m) { return m.mae; },
                [](const PercentChange& c) { return c.mae; });
    metric_rows("r2", "r2_pct_increase", [](const MetricsBundle& m) { return m.r2; },
                [](const PercentChange& c) { return c.r2; });
    metric_rows("mape", "mape_pct_reduction",
                [](const MetricsBundle& m) { return m.mape_percent; },
                [](const PercentChange& c) { return c.mape; });
}

void write_feature_rows_csv(const std::filesystem::path& path, const ModelingDataset& data,
                            const ClusterAssignment& clusters, const Scenario& scenario) {
    csv::Writer w(path);
    std::vector<std::string> header{"station_id", "cluster", "split"};
    header.insert(header.end(), kModelFeatures.begin(), kModelFeatures.end());
    header.push_back("target_log");
    w.row(header);
    for (const YearData& year : data.years) {
        if (const auto* ds = std::get_if<DaySpecific>(&scenario);
            ds && !year.calendar.is_valid(ds->day)) {
            continue;
        }
        for (const FeatureRow& row : build_feature_rows(year, scenario).rows) {
            auto label = clusters.labels.find(row.key);
            const auto subset = data.split.find(row.key);
            w.row({row.key.station_id,
                   label == clusters.labels.end() ? "NA" : std::to_string(label->second),
                   subset ? std::string(to_string(*subset)) : "NA", std::to_string(row.year),
                   fmt::format("{}", row.latitude), fmt::format("{}", row.longitude),
                   std::to_string(row.combined_class), std::to_string(row.lanes),
                   std::to_string(row.area_group), num(row.loo_feature), num(row.target_log)});
        }
    }
}

std::string format_top_days(const SweepResult& sweep, std::size_t n) {
    std::ostringstream out;
    const std::size_t shown = std::min(n, sweep.ranking.size());
    out << fmt::format("{:<12}", "Metric");
    for (std::size_t i = 0; i < shown; ++i) {
        out << fmt::format(" | {:>10}", fmt::format("Day {}", sweep.ranking[i]));
    }
    out << "\n" << fmt::format("{:<12}", "Validation");
    for (std::size_t i = 0; i < shown; ++i) {
        const int day = sweep.ranking[i];
        for (const DayResult& d : sweep.days) {
            if (d.day == day) out << fmt::format(" | {:>10.2f}", d.validation->rmse);
        }
    }
    out << "\n";
    return out.str();
}

}  // namespace optday
