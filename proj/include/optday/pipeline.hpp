#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optday/features.hpp"
#include "optday/ingest.hpp"
#include "optday/metrics.hpp"
#include "optday/trees.hpp"

namespace optday {

// ---------------------------------------------------------------------------
// Target transform

double log1p_transform(double aadt);
double inverse_log1p(double value);

// ---------------------------------------------------------------------------
// Imputation

enum class ImputeLearner { RandomForest, GradientBoosting };
std::string_view to_string(ImputeLearner learner);

struct ImputeParams {
    FitParams forest = [] {
        FitParams p = FitParams::forest_defaults();
        p.n_trees = 100;
        p.min_samples_leaf = 2;
        return p;
    }();
    FitParams boosted = FitParams::boosted_defaults();
    double holdout_fraction = 0.1;
    std::size_t max_training_cells = 15000;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
};

struct LearnerScore {
    double rmse = 0.0;
    std::optional<double> r2;
};

struct ImputationReport {
    int year = 0;
    bool nothing_to_impute = false;
    std::size_t missing_cells = 0;
    std::size_t imputed_cells = 0;
    std::size_t training_cells = 0;
    std::size_t holdout_cells = 0;
    LearnerScore forest;
    LearnerScore boosted;
    double mean_baseline_rmse = 0.0;  // per-station mean on the holdout
    ImputeLearner winner = ImputeLearner::RandomForest;
    std::vector<std::string> flagged_stations;  // no observed valid day
};

struct ImputationResult {
    DailyCountMatrix matrix;
    ImputationReport report;
};

inline const std::vector<std::string> kImputeFeatures = {
    "combined_class", "lanes", "area_group", "latitude", "longitude",
    "doy_sin",        "doy_cos", "station_mean"};

// Lower holdout RMSE wins; a tie keeps the forest.
ImputeLearner select_imputer(const LearnerScore& forest, const LearnerScore& boosted);

// Trains a random forest and a boosted ensemble on observed valid-day cells,
// scores both on a per-station 10% holdout and fills every missing valid-day
// cell with the winner's prediction (clamped at zero).
ImputationResult impute_missing(const DailyCountMatrix& matrix,
                                std::span<const StationRecord> stations,
                                const ImputeParams& params);

// Mean over every available cell; stations with no cells are omitted.
std::map<std::string, double> compute_aadt(const DailyCountMatrix& matrix);

// ---------------------------------------------------------------------------
// Splitting

enum class Subset { Train, Validation, Test };
std::string_view to_string(Subset subset);

struct SplitFractions {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct SplitAssignment {
    std::map<StationKey, Subset> subsets;
    int test_year = 2023;

    std::optional<Subset> find(const StationKey& key) const;
    std::size_t count(Subset subset) const;
    std::string fingerprint() const;
};

// Per cluster: subset sizes by largest remainder (ties Train > Test >
// Validation), Test drawn from `test_year` stations only, the rest shuffled
// into Train then Validation. Throws InvalidArgument naming any cluster with
// no `test_year` station.
SplitAssignment stratified_split(const std::map<StationKey, int>& clusters, std::uint64_t seed,
                                 const SplitFractions& fractions = {}, int test_year = 2023);

// ---------------------------------------------------------------------------
// Scenarios

struct ModelingDataset {
    std::vector<YearData> years;
    SplitAssignment split;
};

struct DayResult {
    int day = 0;  // 0 marks the all-valid-days baseline
    std::optional<MetricsBundle> validation;
    std::optional<MetricsBundle> test;
    std::size_t train_rows = 0;
    std::size_t dropped_rows = 0;
    bool skipped = false;
    std::string skip_reason;
    std::string test_fingerprint;
    std::shared_ptr<const BoostedEnsemble> model;
};

// Builds the scenario's feature rows for every year, fits on Train (log
// target) and scores Validation/Test on the AADT scale. Rows without a LOO
// feature, target or split assignment are dropped and counted; a
// DaySpecific day contributes nothing from years where it is not valid.
DayResult evaluate_scenario(const ModelingDataset& data, const Scenario& scenario,
                            const FitParams& params, bool keep_model = false);

struct SweepOptions {
    FitParams params = FitParams::boosted_defaults();
    int first_day = 1;
    int last_day = kDaysPerYear;
    unsigned jobs = 0;
};

struct SweepResult {
    std::vector<DayResult> days;  // ascending day
    std::vector<int> ranking;     // days by (validation RMSE, day)
};

SweepResult run_scenario1(const ModelingDataset& data, const SweepOptions& options);
DayResult run_scenario2(const ModelingDataset& data, const FitParams& params);

// Days with validation metrics, sorted by (validation RMSE, day).
std::vector<int> rank_days(std::span<const DayResult> days);

// ---------------------------------------------------------------------------
// Comparison

// Positive values are improvements: reductions for RMSE/MAE/MAPE, an increase
// for R^2. Empty when the baseline value is zero or R^2 is undefined.
struct PercentChange {
    std::optional<double> rmse;
    std::optional<double> mae;
    std::optional<double> r2;
    std::optional<double> mape;
};

PercentChange percent_change(const MetricsBundle& baseline, const MetricsBundle& day);

struct ComparisonEntry {
    int day = 0;
    MetricsBundle metrics;
    PercentChange change;
};

struct ComparisonReport {
    MetricsBundle baseline;
    std::vector<ComparisonEntry> days;
};

// Test-set comparison. Throws InvalidArgument when a day lacks test metrics or
// was scored on different test rows than the baseline.
ComparisonReport compare(const DayResult& baseline, std::span<const DayResult> top_days);

// ---------------------------------------------------------------------------
// End to end

enum class ScenarioSelection { Sweep, Baseline, Both };

struct PipelineConfig {
    std::uint64_t seed = 42;
    FitParams boosted = FitParams::boosted_defaults();
    ImputeParams imputation;
    int k = 4;
    SplitFractions split;
    int test_year = 2023;
    ScenarioSelection scenario = ScenarioSelection::Both;
    int first_day = 1;
    int last_day = kDaysPerYear;
    unsigned jobs = 0;
    std::size_t top_n = 5;
};

struct PipelineRun {
    std::vector<ImputationReport> imputation;
    ClusterAssignment clusters;
    std::size_t cluster_attempts = 0;
    ModelingDataset dataset;
    SweepResult sweep;
    std::optional<DayResult> baseline;
    std::optional<ComparisonReport> comparison;
    // Ranked days left out of the comparison because their test rows differ
    // from the baseline's.
    std::vector<int> excluded_from_comparison;
};

PipelineRun run_pipeline(const StagedDataset& staged, const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Reports

// Columns day,split,rmse,mae,r2,mape,n,dropped_rows; two rows per day, one
// "skipped" row for days without a model.
void write_results_csv(const std::filesystem::path& path, std::span<const DayResult> days);
void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report);
void write_feature_rows_csv(const std::filesystem::path& path, const ModelingDataset& data,
                            const ClusterAssignment& clusters, const Scenario& scenario);
// Top-n validation RMSE table.
std::string format_top_days(const SweepResult& sweep, std::size_t n = 5);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace optday
