#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/pipeline.hpp"

namespace optday {

namespace {

struct Cell {
    std::size_t station;  // index into the matrix rows
    int day;
};

std::array<double, 8> cell_features(const StationRecord& s, int day, double station_mean) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(day) / kDaysPerYear;
    return {static_cast<double>(combine_functional_class(s.functional_class)),
            static_cast<double>(s.lanes),
            static_cast<double>(group_area_type(s.area_type)),
            s.latitude,
            s.longitude,
            std::sin(angle),
            std::cos(angle),
            station_mean};
}

LearnerScore score(std::span<const double> actual, std::span<const double> predicted) {
    const MetricsBundle m = compute_metrics(actual, predicted);
    return {m.rmse, m.r2};
}

}  // namespace

std::string_view to_string(ImputeLearner learner) {
    return learner == ImputeLearner::RandomForest ? "random_forest" : "gradient_boosting";
}

ImputeLearner select_imputer(const LearnerScore& forest, const LearnerScore& boosted) {
    return boosted.rmse < forest.rmse ? ImputeLearner::GradientBoosting
                                      : ImputeLearner::RandomForest;
}

double log1p_transform(double aadt) {
    if (!(aadt >= 0.0) || !std::isfinite(aadt)) {
        throw InvalidArgument(fmt::format("log1p transform needs a finite value >= 0, got {}", aadt));
    }
    return std::log1p(aadt);
}

double inverse_log1p(double value) { return std::expm1(value); }

std::map<std::string, double> compute_aadt(const DailyCountMatrix& matrix) {
    std::map<std::string, double> out;
    for (const DailySeries& s : matrix.rows()) {
        double sum = 0.0;
        int n = 0;
        for (int day = 1; day <= kDaysPerYear; ++day) {
            if (!s.has(day)) continue;
            sum += s.at(day);
            ++n;
        }
        if (n > 0) out.emplace(s.station_id, sum / n);
    }
    return out;
}

ImputationResult impute_missing(const DailyCountMatrix& matrix,
                                std::span<const StationRecord> stations,
                                const ImputeParams& params) {
    const ValidDayCalendar calendar = build_valid_day_calendar(matrix.year());
    ImputationResult result{matrix, {}};
    ImputationReport& report = result.report;
    report.year = matrix.year();

    std::map<std::string, const StationRecord*> by_id;
    for (const StationRecord& s : stations) {
        if (s.year == matrix.year()) by_id[s.station_id] = &s;
    }

    const auto& rows = matrix.rows();
    std::vector<const StationRecord*> attrs(rows.size(), nullptr);
    std::vector<Cell> missing;
    std::vector<std::vector<int>> observed_days(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (auto it = by_id.find(rows[i].station_id); it != by_id.end()) attrs[i] = it->second;
        for (int day = 1; day <= kDaysPerYear; ++day) {
            if (!calendar.is_valid(day)) continue;
            if (rows[i].has(day)) {
                observed_days[i].push_back(day);
            } else {
                missing.push_back({i, day});
            }
        }
        if (observed_days[i].empty() || attrs[i] == nullptr) {
            report.flagged_stations.push_back(rows[i].station_id);
        }
    }
    std::erase_if(missing, [&](const Cell& c) {
        return observed_days[c.station].empty() || attrs[c.station] == nullptr;
    });
    report.missing_cells = missing.size();
    if (missing.empty()) {
        report.nothing_to_impute = true;
        return result;
    }

    // Per-station holdout keeps every station represented in both parts.
    std::mt19937_64 rng(params.seed);
    std::vector<Cell> train, holdout;
    std::vector<double> station_mean(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (attrs[i] == nullptr || observed_days[i].empty()) continue;
        auto days = observed_days[i];
        std::shuffle(days.begin(), days.end(), rng);
        const auto n_hold = static_cast<std::size_t>(
            std::floor(params.holdout_fraction * static_cast<double>(days.size()) + 0.5));
        const std::size_t keep = days.size() - std::min(n_hold, days.size() - 1);
        double sum = 0.0;
        for (std::size_t j = 0; j < days.size(); ++j) {
            if (j < keep) {
                train.push_back({i, days[j]});
                sum += rows[i].at(days[j]);
            } else {
                holdout.push_back({i, days[j]});
            }
        }
        station_mean[i] = sum / static_cast<double>(keep);
    }
    if (train.size() > params.max_training_cells) {
        std::shuffle(train.begin(), train.end(), rng);
        train.resize(params.max_training_cells);
    }
    auto by_position = [](const Cell& a, const Cell& b) {
        return std::tie(a.station, a.day) < std::tie(b.station, b.day);
    };
    std::sort(train.begin(), train.end(), by_position);
    report.training_cells = train.size();
    report.holdout_cells = holdout.size();

    auto build = [&](const std::vector<Cell>& cells) {
        FeatureMatrix x(kImputeFeatures);
        x.values.reserve(cells.size() * kImputeFeatures.size());
        for (const Cell& c : cells) {
            const auto f = cell_features(*attrs[c.station], c.day, station_mean[c.station]);
            x.add_row(f);
        }
        return x;
    };
    auto targets = [&](const std::vector<Cell>& cells) {
        std::vector<double> y;
        y.reserve(cells.size());
        for (const Cell& c : cells) y.push_back(rows[c.station].at(c.day));
        return y;
    };

    const FeatureMatrix x_train = build(train);
    const std::vector<double> y_train = targets(train);
    FitParams forest_params = params.forest;
    forest_params.seed = derive_seed(params.seed, 1);
    const RandomForestModel forest = fit_forest(x_train, y_train, forest_params, params.jobs);
    const BoostedEnsemble boosted = fit_boosted(x_train, y_train, params.boosted);

    ImputeLearner winner = ImputeLearner::RandomForest;
    if (holdout.size() >= 2) {
        const FeatureMatrix x_hold = build(holdout);
        const std::vector<double> y_hold = targets(holdout);
        report.forest = score(y_hold, predict(forest, x_hold));
        report.boosted = score(y_hold, predict(boosted, x_hold));
        std::vector<double> mean_pred;
        mean_pred.reserve(holdout.size());
        for (const Cell& c : holdout) mean_pred.push_back(station_mean[c.station]);
        report.mean_baseline_rmse = compute_metrics(y_hold, mean_pred).rmse;
        winner = select_imputer(report.forest, report.boosted);
    }
    report.winner = winner;

    const FeatureMatrix x_missing = build(missing);
    const std::vector<double> filled = winner == ImputeLearner::RandomForest
                                           ? predict(forest, x_missing)
                                           : predict(boosted, x_missing);
    auto& out_rows = result.matrix.rows();
    for (std::size_t j = 0; j < missing.size(); ++j) {
        out_rows[missing[j].station].set(missing[j].day, std::max(0.0, filled[j]));
    }
    report.imputed_cells = missing.size();
    return result;
}

}  // namespace optday
