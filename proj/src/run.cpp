#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/pipeline.hpp"

namespace optday {

namespace {
constexpr std::size_t kClusterAttempts = 64;
}

PipelineRun run_pipeline(const StagedDataset& staged, const PipelineConfig& config) {
    PipelineRun run;
    if (staged.stations.empty()) throw InvalidArgument("staged dataset has no continuous stations");

    std::vector<StationRecord> cluster_input;
    for (const auto& [year, matrix] : staged.matrices) {
        std::vector<StationRecord> stations;
        for (const StationRecord& s : staged.stations) {
            if (s.year == year) stations.push_back(s);
        }
        ImputeParams imp = config.imputation;
        imp.seed = derive_seed(config.seed, 100 + static_cast<std::uint64_t>(year));
        imp.jobs = config.jobs;
        ImputationResult imputed = impute_missing(matrix, stations, imp);
        run.imputation.push_back(imputed.report);

        std::map<std::string, double> aadt = compute_aadt(imputed.matrix);
        std::erase_if(stations, [&](const StationRecord& s) { return !aadt.contains(s.station_id); });
        cluster_input.insert(cluster_input.end(), stations.begin(), stations.end());
        DailyCountMatrix filtered =
            filter_to_valid_days(imputed.matrix, build_valid_day_calendar(year));
        run.dataset.years.push_back(
            prepare_year(std::move(stations), std::move(filtered), staged.short_counts,
                         std::move(aadt)));
    }

    std::set<StationKey> continuous_keys;
    for (const StationRecord& s : cluster_input) continuous_keys.insert(key_of(s));
    for (const ShortCountRecord& r : staged.short_counts) cluster_input.push_back(station_of(r));
    // k-means often isolates one year in its own cluster; re-seed until every
    // cluster can supply test rows, and let the split report the failure
    // otherwise.
    std::map<StationKey, int> labels;
    for (std::size_t attempt = 0; attempt < kClusterAttempts; ++attempt) {
        run.clusters = cluster_stations(cluster_input, config.k,
                                        derive_seed(config.seed, 2 + 1000 * attempt));
        run.cluster_attempts = attempt + 1;
        labels.clear();
        std::set<int> with_test_year;
        for (const auto& [key, label] : run.clusters.labels) {
            if (!continuous_keys.contains(key)) continue;
            labels.emplace(key, label);
            if (key.year == config.test_year) with_test_year.insert(label);
        }
        if (static_cast<int>(with_test_year.size()) == run.clusters.k) break;
    }
    run.dataset.split =
        stratified_split(labels, derive_seed(config.seed, 3), config.split, config.test_year);

    if (config.scenario != ScenarioSelection::Baseline) {
        SweepOptions sweep;
        sweep.params = config.boosted;
        sweep.first_day = config.first_day;
        sweep.last_day = config.last_day;
        sweep.jobs = config.jobs;
        run.sweep = run_scenario1(run.dataset, sweep);
    }
    if (config.scenario != ScenarioSelection::Sweep) {
        run.baseline = run_scenario2(run.dataset, config.boosted);
    }
    if (run.baseline && !run.baseline->skipped && run.baseline->test &&
        !run.sweep.ranking.empty()) {
        std::vector<DayResult> top;
        for (int day : run.sweep.ranking) {
            if (top.size() >= config.top_n) break;
            const DayResult& d =
                run.sweep.days[static_cast<std::size_t>(day - config.first_day)];
            if (d.test && d.test_fingerprint == run.baseline->test_fingerprint) {
                top.push_back(d);
            } else {
                run.excluded_from_comparison.push_back(day);
            }
        }
        run.comparison = compare(*run.baseline, top);
    }
    return run;
}

}  // namespace optday
