#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>
#include <set>

#include "optday/error.hpp"
#include "optday/pipeline.hpp"
#include "optday/synth.hpp"

using namespace optday;

namespace {

std::map<StationKey, int> clustered(int clusters, int per_cluster, int year = 2023) {
    std::map<StationKey, int> out;
    for (int c = 0; c < clusters; ++c) {
        for (int i = 0; i < per_cluster; ++i) {
            out[{"c" + std::to_string(c) + "_" + std::to_string(i), year}] = c;
        }
    }
    return out;
}

MetricsBundle bundle(double rmse, double mae, double r2, double mape) {
    return {rmse, mae, r2, mape, 10};
}

// Stations with a yearly sinusoid around their own level, every valid day observed.
struct SeasonalNetwork {
    std::vector<StationRecord> stations;
    DailyCountMatrix matrix{2022};
};

SeasonalNetwork seasonal_network(std::size_t n, std::uint64_t seed) {
    SeasonalNetwork net;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(500, 5000), phase(0, 1);
    std::normal_distribution<double> noise(0, 0.01);
    const ValidDayCalendar cal = build_valid_day_calendar(2022);
    for (std::size_t i = 0; i < n; ++i) {
        StationRecord s;
        s.latitude = 30 + 0.01 * static_cast<double>(i);
        s.longitude = -97;
        s.functional_class = i % 2 ? FunctionalClass::Local : FunctionalClass::MinorArterial;
        s.area_type = i % 3 ? AreaType::Rural : AreaType::Urban;
        s.lanes = 2;
        s.year = 2022;
        s.station_id = make_station_id(s.latitude, s.longitude, s.functional_class);
        const double base = level(rng);
        for (int d : cal.valid_days()) {
            const double season = 1 + 0.3 * std::sin(2 * std::numbers::pi * d / 365.0);
            net.matrix.row(s.station_id).set(d, std::round(base * season * (1 + noise(rng))));
        }
        net.stations.push_back(s);
    }
    return net;
}

ImputeParams quick_impute(std::uint64_t seed) {
    ImputeParams p;
    p.forest.n_trees = 30;
    p.boosted.n_trees = 60;
    p.max_training_cells = 4000;
    p.seed = seed;
    p.jobs = 1;
    return p;
}

SynthConfig small_synth(std::uint64_t seed) {
    SynthConfig c;
    c.n_continuous = 120;
    c.n_short = 100;
    c.seed = seed;
    c.group_day_signal = GroupDaySignal{};
    return c;
}

}  // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("log1p target transform") {
        CHECK(log1p_transform(0) == 0.0);
        CHECK(log1p_transform(std::numbers::e - 1) == doctest::Approx(1.0));
        CHECK(inverse_log1p(log1p_transform(12345.0)) == doctest::Approx(12345.0));
        CHECK_THROWS_AS(log1p_transform(-1), InvalidArgument);
        CHECK_THROWS_AS(log1p_transform(std::nan("")), InvalidArgument);
    }

    TEST_CASE("split sizes follow largest remainder per cluster") {
        const SplitAssignment one = stratified_split(clustered(1, 40), 3);
        CHECK(one.count(Subset::Train) == 32);
        CHECK(one.count(Subset::Validation) == 4);
        CHECK(one.count(Subset::Test) == 4);

        const SplitAssignment four = stratified_split(clustered(4, 10), 3);
        const auto labels = clustered(4, 10);
        for (int c = 0; c < 4; ++c) {
            std::map<Subset, int> counts;
            for (const auto& [key, label] : labels) {
                if (label == c) ++counts[*four.find(key)];
            }
            CHECK(counts[Subset::Train] == 8);
            CHECK(counts[Subset::Validation] == 1);
            CHECK(counts[Subset::Test] == 1);
        }

        const SplitAssignment three = stratified_split(clustered(1, 3), 3);
        CHECK(three.count(Subset::Train) == 3);
    }

    TEST_CASE("split determinism and test-year constraint") {
        auto labels = clustered(2, 15, 2022);
        for (int i = 0; i < 15; ++i) labels[{"t" + std::to_string(i), 2023}] = i % 2;
        const SplitAssignment a = stratified_split(labels, 9), b = stratified_split(labels, 9);
        CHECK(a.subsets == b.subsets);
        CHECK(a.fingerprint() == b.fingerprint());
        CHECK(stratified_split(labels, 10).fingerprint() != a.fingerprint());
        for (const auto& [key, subset] : a.subsets) {
            if (subset == Subset::Test) CHECK(key.year == 2023);
        }

        auto broken = clustered(2, 5, 2023);
        for (int i = 0; i < 5; ++i) broken[{"old" + std::to_string(i), 2022}] = 7;
        try {
            stratified_split(broken, 1);
            FAIL("expected InvalidArgument");
        } catch (const InvalidArgument& e) {
            CHECK(std::string(e.what()).find("[7]") != std::string::npos);
        }
        CHECK_THROWS_AS(stratified_split(labels, 1, {0.5, 0.5, 0.5}), InvalidArgument);
    }

    TEST_CASE("percent change worked example") {
        const auto base = bundle(100, 50, 0.80, 20);
        const auto day = bundle(70.37, 40, 0.8346, 25);
        const PercentChange c = percent_change(base, day);
        CHECK(*c.rmse == doctest::Approx(29.63));
        CHECK(*c.mae == doctest::Approx(20.0));
        CHECK(*c.r2 == doctest::Approx(4.325));
        CHECK(*c.mape == doctest::Approx(-25.0));

        const PercentChange same = percent_change(base, base);
        CHECK(*same.rmse == 0.0);
        CHECK(*same.r2 == 0.0);

        MetricsBundle zero = bundle(0, 0, 0.5, 0);
        zero.r2.reset();
        const PercentChange undefined = percent_change(zero, base);
        CHECK_FALSE(undefined.rmse.has_value());
        CHECK_FALSE(undefined.r2.has_value());
    }

    TEST_CASE("compare requires matching test rows") {
        DayResult base, day;
        base.test = bundle(10, 5, 0.5, 10);
        base.test_fingerprint = "abc";
        day.day = 186;
        day.test = bundle(8, 4, 0.6, 8);
        day.test_fingerprint = "abc";
        const std::vector<DayResult> top{day};
        const ComparisonReport r = compare(base, top);
        REQUIRE(r.days.size() == 1);
        CHECK(*r.days[0].change.rmse == doctest::Approx(20.0));

        std::vector<DayResult> mismatched{day};
        mismatched[0].test_fingerprint = "xyz";
        CHECK_THROWS_AS(compare(base, mismatched), InvalidArgument);
        std::vector<DayResult> missing{day};
        missing[0].test.reset();
        CHECK_THROWS_AS(compare(base, missing), InvalidArgument);
    }

    TEST_CASE("rank ties break on the lower day") {
        std::vector<DayResult> days(4);
        const double rmse[] = {5, 3, 3, 1};
        for (int i = 0; i < 4; ++i) {
            days[i].day = 10 + i;
            days[i].validation = bundle(rmse[i], 1, 0.5, 1);
        }
        days[3].skipped = true;
        CHECK(rank_days(days) == std::vector<int>{11, 12, 10});
    }

    TEST_CASE("imputation without missing cells is the identity") {
        const SeasonalNetwork net = seasonal_network(12, 1);
        const ImputationResult r = impute_missing(net.matrix, net.stations, quick_impute(1));
        CHECK(r.report.nothing_to_impute);
        CHECK(r.report.imputed_cells == 0);
        for (std::size_t i = 0; i < net.matrix.size(); ++i) {
            CHECK(r.matrix.rows()[i].values == net.matrix.rows()[i].values);
            CHECK(r.matrix.rows()[i].observed == net.matrix.rows()[i].observed);
        }
    }

    TEST_CASE("imputation fills masked cells better than the station mean") {
        SeasonalNetwork net = seasonal_network(30, 2);
        std::mt19937_64 rng(5);
        const ValidDayCalendar cal = build_valid_day_calendar(2022);
        std::size_t masked = 0;
        for (DailySeries& row : net.matrix.rows()) {
            for (int d : cal.valid_days()) {
                if (rng() % 10 == 0) {
                    row.clear(d);
                    ++masked;
                }
            }
        }
        const ImputationResult r = impute_missing(net.matrix, net.stations, quick_impute(2));
        CHECK(r.report.missing_cells == masked);
        CHECK(r.report.imputed_cells == masked);
        const double best = std::min(r.report.forest.rmse, r.report.boosted.rmse);
        CHECK(best < 0.8 * r.report.mean_baseline_rmse);
        CHECK(r.report.winner == select_imputer(r.report.forest, r.report.boosted));
        for (const DailySeries& row : r.matrix.rows()) {
            for (int d : cal.valid_days()) {
                REQUIRE(row.has(d));
                CHECK(row.at(d) >= 0);
            }
        }
    }

    TEST_CASE("a station without observed valid days is flagged") {
        SeasonalNetwork net = seasonal_network(10, 3);
        net.matrix.rows()[4].observed.reset();
        net.matrix.rows()[1].clear(186);
        const ImputationResult r = impute_missing(net.matrix, net.stations, quick_impute(3));
        CHECK(r.report.flagged_stations == std::vector<std::string>{net.matrix.rows()[4].station_id});
        CHECK(r.matrix.rows()[1].has(186));
    }

    TEST_CASE("imputer selection keeps the forest on ties") {
        CHECK(select_imputer({1.0, 0.5}, {1.0, 0.5}) == ImputeLearner::RandomForest);
        CHECK(select_imputer({1.0, 0.5}, {0.9, 0.6}) == ImputeLearner::GradientBoosting);
    }

    TEST_CASE("AADT is the mean of available cells") {
        DailyCountMatrix m(2022);
        m.row("A").set(1, 10);
        m.row("A").set(5, 20);
        m.row("B");
        const auto aadt = compute_aadt(m);
        CHECK(aadt.at("A") == 15);
        CHECK_FALSE(aadt.contains("B"));
    }

    TEST_CASE("baseline is near perfect when every station has the same volume") {
        std::vector<YearData> years;
        for (int year : {2022, 2023}) {
            const ValidDayCalendar cal = build_valid_day_calendar(year);
            std::vector<StationRecord> stations;
            DailyCountMatrix m(year);
            std::map<std::string, double> aadt;
            for (int i = 0; i < 40; ++i) {
                StationRecord s;
                s.latitude = 30 + 0.01 * i;
                s.longitude = -97 + 0.02 * (i % 7);
                s.functional_class = i % 2 ? FunctionalClass::Local : FunctionalClass::Interstate;
                s.area_type = i % 3 ? AreaType::Rural : AreaType::Urban;
                s.lanes = 2;
                s.year = year;
                s.station_id = make_station_id(s.latitude, s.longitude, s.functional_class);
                for (int d : cal.valid_days()) m.row(s.station_id).set(d, 1000);
                aadt[s.station_id] = 1000;
                stations.push_back(s);
            }
            years.push_back(prepare_year(stations, m, {}, aadt));
        }
        ModelingDataset data;
        std::map<StationKey, int> labels;
        for (const YearData& y : years) {
            for (const auto& s : y.continuous) labels[key_of(s)] = 0;
        }
        data.years = std::move(years);
        data.split = stratified_split(labels, 1);
        const DayResult base = run_scenario2(data, FitParams::boosted_defaults());
        REQUIRE(base.test.has_value());
        CHECK(base.test->rmse < 1e-6);
        CHECK(base.model != nullptr);
    }

    TEST_CASE("end-to-end sweep over a day range") {
        const SynthData synth = generate(small_synth(11));
        PipelineConfig cfg;
        cfg.seed = 4;
        cfg.first_day = 180;
        cfg.last_day = 190;
        cfg.jobs = 1;
        cfg.boosted.n_trees = 50;
        cfg.imputation = quick_impute(0);
        const PipelineRun run = run_pipeline(synth.staged, cfg);
        REQUIRE(run.sweep.days.size() == 11);
        for (int i = 0; i < 11; ++i) CHECK(run.sweep.days[i].day == 180 + i);
        // 2022 Fri-Sun and 2023 Fri-Sun: day 183 (2022 Sat, 2023 Sun) has no valid year.
        CHECK(run.sweep.days[3].skipped);
        REQUIRE(run.baseline.has_value());
        REQUIRE(run.comparison.has_value());
        CHECK(run.cluster_attempts >= 1);
        for (const ComparisonEntry& e : run.comparison->days) {
            CHECK(std::find(run.sweep.ranking.begin(), run.sweep.ranking.end(), e.day) !=
                  run.sweep.ranking.end());
        }

        const PipelineRun again = run_pipeline(synth.staged, cfg);
        CHECK(again.sweep.ranking == run.sweep.ranking);
        CHECK(again.dataset.split.fingerprint() == run.dataset.split.fingerprint());
        CHECK(again.baseline->test->rmse == run.baseline->test->rmse);
    }
}
