#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/hash.hpp"
#include "optday/parallel.hpp"
#include "optday/pipeline.hpp"

namespace optday {

namespace {

struct Partition {
    std::vector<const FeatureRow*> train, validation, test;
};

std::optional<MetricsBundle> score_rows(const BoostedEnsemble& model,
                                        const std::vector<const FeatureRow*>& rows) {
    if (rows.size() < 2) return std::nullopt;
    const FeatureMatrix x = to_feature_matrix(rows);
    const std::vector<double> log_pred = predict(model, x);
    std::vector<double> actual, predicted;
    actual.reserve(rows.size());
    predicted.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        actual.push_back(inverse_log1p(*rows[i]->target_log));
        predicted.push_back(inverse_log1p(log_pred[i]));
    }
    return compute_metrics(actual, predicted);
}

}  // namespace

DayResult evaluate_scenario(const ModelingDataset& data, const Scenario& scenario,
                            const FitParams& params, bool keep_model) {
    DayResult result;
    if (const auto* ds = std::get_if<DaySpecific>(&scenario)) result.day = ds->day;

    std::vector<FeatureRow> rows;
    for (const YearData& year : data.years) {
        if (const auto* ds = std::get_if<DaySpecific>(&scenario);
            ds && !year.calendar.is_valid(ds->day)) {
            result.dropped_rows += year.continuous.size();
            continue;
        }
        FeatureRows built = build_feature_rows(year, scenario);
        for (auto& row : built.rows) rows.push_back(std::move(row));
    }

    Partition part;
    for (const FeatureRow& row : rows) {
        const auto subset = data.split.find(row.key);
        if (!row.loo_feature || !row.target_log || !subset) {
            ++result.dropped_rows;
            continue;
        }
        switch (*subset) {
            case Subset::Train:
                part.train.push_back(&row);
                break;
            case Subset::Validation:
                part.validation.push_back(&row);
                break;
            case Subset::Test:
                part.test.push_back(&row);
                break;
        }
    }

    result.train_rows = part.train.size();
    if (part.train.empty()) {
        result.skipped = true;
        result.skip_reason = "no usable training rows";
        return result;
    }

    std::vector<const FeatureRow*> test_sorted = part.test;
    std::sort(test_sorted.begin(), test_sorted.end(),
              [](const FeatureRow* a, const FeatureRow* b) { return a->key < b->key; });
    Fingerprint fp;
    for (const FeatureRow* r : test_sorted) {
        fp.update(r->key.station_id);
        fp.update(static_cast<std::int64_t>(r->key.year));
    }
    result.test_fingerprint = fp.hex();

    const FeatureMatrix x_train = to_feature_matrix(part.train);
    std::vector<double> y_train;
    y_train.reserve(part.train.size());
    for (const FeatureRow* r : part.train) y_train.push_back(*r->target_log);
    auto model = std::make_shared<BoostedEnsemble>(fit_boosted(x_train, y_train, params));

    result.validation = score_rows(*model, part.validation);
    result.test = score_rows(*model, part.test);
    if (keep_model) result.model = std::move(model);
    return result;
}

std::vector<int> rank_days(std::span<const DayResult> days) {
    std::vector<const DayResult*> ranked;
    for (const DayResult& d : days) {
        if (!d.skipped && d.validation) ranked.push_back(&d);
    }
    std::sort(ranked.begin(), ranked.end(), [](const DayResult* a, const DayResult* b) {
        if (a->validation->rmse != b->validation->rmse) {
            return a->validation->rmse < b->validation->rmse;
        }
        return a->day < b->day;
    });
    std::vector<int> out;
    out.reserve(ranked.size());
    for (const DayResult* d : ranked) out.push_back(d->day);
    return out;
}

SweepResult run_scenario1(const ModelingDataset& data, const SweepOptions& options) {
    if (options.first_day < 1 || options.last_day > kDaysPerYear ||
        options.first_day > options.last_day) {
        throw InvalidArgument(fmt::format("day range {}-{} must lie within 1-365",
                                          options.first_day, options.last_day));
    }
    SweepResult out;
    out.days.resize(static_cast<std::size_t>(options.last_day - options.first_day + 1));
    parallel_for(out.days.size(), options.jobs, [&](std::size_t i) {
        const int day = options.first_day + static_cast<int>(i);
        out.days[i] = evaluate_scenario(data, DaySpecific{day}, options.params);
    });
    out.ranking = rank_days(out.days);
    return out;
}

DayResult run_scenario2(const ModelingDataset& data, const FitParams& params) {
    return evaluate_scenario(data, AllValidDays{}, params, true);
}

PercentChange percent_change(const MetricsBundle& baseline, const MetricsBundle& day) {
    auto reduction = [](double b, double d) -> std::optional<double> {
        if (b == 0.0) return d == 0.0 ? std::optional<double>(0.0) : std::nullopt;
        return (b - d) / b * 100.0;
    };
    PercentChange c;
    c.rmse = reduction(baseline.rmse, day.rmse);
    c.mae = reduction(baseline.mae, day.mae);
    c.mape = reduction(baseline.mape_percent, day.mape_percent);
    if (baseline.r2 && day.r2) {
        if (*baseline.r2 != 0.0) {
            c.r2 = (*day.r2 - *baseline.r2) / *baseline.r2 * 100.0;
        } else if (*day.r2 == 0.0) {
            c.r2 = 0.0;
        }
    }
    return c;
}

ComparisonReport compare(const DayResult& baseline, std::span<const DayResult> top_days) {
    if (!baseline.test) throw InvalidArgument("baseline has no test metrics");
    ComparisonReport report;
    report.baseline = *baseline.test;
    for (const DayResult& d : top_days) {
        if (!d.test) throw InvalidArgument(fmt::format("day {} has no test metrics", d.day));
        if (d.test_fingerprint != baseline.test_fingerprint) {
            throw InvalidArgument(fmt::format(
                "day {} was scored on different test rows than the baseline ({} vs {})", d.day,
                d.test_fingerprint, baseline.test_fingerprint));
        }
        report.days.push_back({d.day, *d.test, percent_change(*baseline.test, *d.test)});
    }
    return report;
}

}  // namespace optday
