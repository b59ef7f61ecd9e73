#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "optday/csv.hpp"
#include "optday/error.hpp"
#include "optday/ingest.hpp"
#include "optday/station.hpp"
#include "../support.hpp"

using namespace optday;
using testing::TempDir;
using testing::write_text;

namespace {

const std::string kContinuousHeader =
    "station_id,latitude,longitude,functional_class,lanes,area_type,date,hour,volume\n";
const std::string kShortHeader =
    "station_id,latitude,longitude,functional_class,lanes,area_type,date,volume_24h,aadt\n";

LongCountRow hourly(const std::string& id, int hour, double v) {
    return {id, make_date(2022, 7, 5), hour, v};
}

}  // namespace

TEST_SUITE("ingest") {
    TEST_CASE("station ids and enum parsing") {
        CHECK(make_station_id(30.5, -97.25, FunctionalClass::MinorArterial) ==
              "30.500000|-97.250000|minor_arterial");
        CHECK(parse_functional_class("Minor Arterial") == FunctionalClass::MinorArterial);
        CHECK(parse_functional_class("other-principal-arterial") ==
              FunctionalClass::OtherPrincipalArterial);
        CHECK(parse_functional_class("7") == FunctionalClass::Local);
        CHECK_THROWS_AS(parse_functional_class("ramp"), InvalidArgument);
        CHECK(parse_area_type("small urban") == AreaType::SmallUrban);
        CHECK_THROWS_AS(parse_area_type(""), InvalidArgument);
    }

    TEST_CASE("csv splitting handles quotes") {
        CHECK(csv::split_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
        CHECK(csv::split_line("\"x\"\"y\",") == std::vector<std::string>{"x\"y", ""});
        CHECK(csv::escape("plain") == "plain");
        CHECK(csv::escape("a,b") == "\"a,b\"");
    }

    TEST_CASE("well-formed three-row continuous file") {
        TempDir dir("ingest");
        write_text(dir / "c.csv", kContinuousHeader +
                                      ",30.1,-97.1,interstate,4,urban,2022-07-05,,1000\n"
                                      ",30.1,-97.1,interstate,4,urban,2022-07-06,,1100\n"
                                      ",30.2,-97.2,local,2,rural,2022-07-05,,50\n");
        const ParsedFile f = parse_count_file(dir / "c.csv", CountSchema::Continuous);
        CHECK(f.counts.size() == 3);
        CHECK(f.rejects.empty());
        CHECK(f.stations.size() == 2);
        CHECK(f.counts[0].station_id == "30.100000|-97.100000|interstate");
        CHECK_FALSE(f.counts[0].hour.has_value());
    }

    TEST_CASE("negative volume rows are rejected") {
        TempDir dir("ingest");
        write_text(dir / "c.csv", kContinuousHeader +
                                      ",30.1,-97.1,interstate,4,urban,2022-07-05,,1000\n"
                                      ",30.1,-97.1,interstate,4,urban,2022-07-06,,-5\n"
                                      ",30.1,-97.1,interstate,4,urban,2022-07-07,,1100\n");
        const ParsedFile f = parse_count_file(dir / "c.csv", CountSchema::Continuous);
        CHECK(f.counts.size() == 2);
        REQUIRE(f.rejects.size() == 1);
        CHECK(f.rejects[0].reason == "negative volume");
        CHECK(f.rejects[0].line_number == 3);
    }

    TEST_CASE("other row-level rejects") {
        TempDir dir("ingest");
        write_text(dir / "c.csv",
                   kContinuousHeader +
                       ",30.1,-97.1,interstate,4,urban,2024-07-05,,1000\n"      // leap year
                       ",30.1,-97.1,interstate,4,urban,2022-07-05,,1000\n"
                       ",30.1,-97.1,interstate,4,urban,2022-07-05,,1000\n"      // duplicate
                       ",30.1,-97.1,interstate,6,urban,2022-07-06,,1000\n"      // conflicting
                       "1|2|3,30.1,-97.1,interstate,4,urban,2022-07-07,,1000\n" // id mismatch
                       ",30.1,-97.1,ramp,4,urban,2022-07-08,,1000\n"
                       ",30.1,-97.1,interstate,4,urban,2022-13-01,,1000\n");
        const ParsedFile f = parse_count_file(dir / "c.csv", CountSchema::Continuous);
        CHECK(f.counts.size() == 1);
        REQUIRE(f.rejects.size() == 6);
        CHECK(f.rejects[0].reason == "leap year");
        CHECK(f.rejects[1].reason == "duplicate row");
        CHECK(f.rejects[2].reason == "conflicting station attributes");
        CHECK(f.rejects[3].reason.find("does not match") != std::string::npos);
    }

    TEST_CASE("study box filter") {
        TempDir dir("ingest");
        write_text(dir / "c.csv", kContinuousHeader +
                                      ",30.1,-97.1,interstate,4,urban,2022-07-05,,1000\n"
                                      ",45.0,-97.1,interstate,4,urban,2022-07-05,,1000\n");
        IngestOptions options;
        options.box = {29.0, 33.0, -99.0, -95.0};
        const ParsedFile f = parse_count_file(dir / "c.csv", CountSchema::Continuous, options);
        CHECK(f.counts.size() == 1);
        REQUIRE(f.rejects.size() == 1);
        CHECK(f.rejects[0].reason == "coordinates outside study box");
    }

    TEST_CASE("missing column is a schema error naming it") {
        TempDir dir("ingest");
        write_text(dir / "c.csv", "station_id,latitude,longitude,functional_class,lanes,date,volume\n");
        try {
            parse_count_file(dir / "c.csv", CountSchema::Continuous);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("area_type") != std::string::npos);
        }
    }

    TEST_CASE("short-count row passes through") {
        TempDir dir("ingest");
        write_text(dir / "s.csv", kShortHeader + ",30.1,-97.1,major collector,2,rural,2022-02-14,1200,1350\n");
        const ParsedFile f = parse_count_file(dir / "s.csv", CountSchema::Short);
        REQUIRE(f.short_counts.size() == 1);
        const ShortCountRecord& r = f.short_counts[0];
        CHECK(r.observed_count == 1200);
        CHECK(r.day_of_year == 45);
        CHECK(r.aadt == 1350);
        CHECK(r.year == 2022);
        CHECK(r.functional_class == FunctionalClass::MajorCollector);
    }

    TEST_CASE("attributes file fills blank lanes and area type") {
        TempDir dir("ingest");
        write_text(dir / "a.csv", "station_id,lanes,area_type\n30.100000|-97.100000|interstate,6,large urban\n");
        write_text(dir / "c.csv", kContinuousHeader + ",30.1,-97.1,interstate,,,2022-07-05,,1000\n");
        IngestInputs in;
        in.continuous = dir / "c.csv";
        in.attributes = dir / "a.csv";
        const IngestResult r = ingest_files(in, {});
        REQUIRE(r.dataset.stations.size() == 1);
        CHECK(r.dataset.stations[0].lanes == 6);
        CHECK(r.dataset.stations[0].area_type == AreaType::LargeUrban);
    }

    TEST_CASE("hourly aggregation") {
        std::vector<LongCountRow> rows;
        for (int h = 0; h < 24; ++h) rows.push_back(hourly("A", h, 10));
        DailyAggregation agg = aggregate_hourly_to_daily(rows);
        REQUIRE(agg.daily.size() == 1);
        CHECK(agg.daily[0].volume == 240);
        CHECK(agg.incomplete.empty());

        rows.pop_back();
        agg = aggregate_hourly_to_daily(rows);
        CHECK(agg.daily.empty());
        CHECK(agg.incomplete.size() == 1);

        rows.clear();
        for (const char* id : {"A", "B"}) {
            for (int h = 0; h < 24; ++h) rows.push_back(hourly(id, h, 1));
        }
        CHECK(aggregate_hourly_to_daily(rows).daily.size() == 2);

        rows = {hourly("A", 0, 1), {"A", make_date(2022, 7, 5), std::nullopt, 5}};
        CHECK_THROWS_AS(aggregate_hourly_to_daily(rows), InvalidArgument);
    }

    TEST_CASE("pivot to wide") {
        std::vector<LongCountRow> rows{{"A", date_from_day_of_year(2022, 1), std::nullopt, 5},
                                       {"A", date_from_day_of_year(2022, 3), std::nullopt, 7}};
        const DailyCountMatrix m = pivot_to_wide(rows, 2022);
        REQUIRE(m.size() == 1);
        const DailySeries& s = m.rows()[0];
        CHECK(s.observed_count() == 2);
        CHECK(s.has(1));
        CHECK(s.has(3));
        CHECK_FALSE(s.has(2));
        CHECK(s.at(3) == 7);
        CHECK(pivot_to_wide({}, 2022).empty());
        CHECK(unpivot(m).size() == 2);

        rows.push_back(rows[0]);
        CHECK_THROWS_AS(pivot_to_wide(rows, 2022), InvalidArgument);
        CHECK_THROWS_AS(pivot_to_wide(rows, 2023), InvalidArgument);
    }

    TEST_CASE("dense pivot of 631 stations") {
        std::vector<LongCountRow> rows;
        for (int s = 0; s < 631; ++s) {
            for (int d = 1; d <= kDaysPerYear; ++d) {
                rows.push_back({"S" + std::to_string(s), date_from_day_of_year(2022, d), std::nullopt, 1.0});
            }
        }
        const DailyCountMatrix m = pivot_to_wide(rows, 2022);
        CHECK(m.size() == 631);
        CHECK(std::all_of(m.rows().begin(), m.rows().end(),
                          [](const DailySeries& s) { return s.observed_count() == kDaysPerYear; }));
    }

    TEST_CASE("merge short counts is an inner join on positive AADT") {
        auto rec = [](const std::string& id) {
            ShortCountRecord r;
            r.station_id = id;
            r.year = 2022;
            r.day_of_year = 186;
            r.observed_count = 100;
            return r;
        };
        const std::vector<ShortCountRecord> counts{rec("A"), rec("B"), rec("C")};
        MergeResult m = merge_short_counts(counts, {{"A", 2022, 120}, {"B", 2022, 130}});
        CHECK(m.records.size() == 2);
        CHECK(m.dropped == 1);
        CHECK(m.records[0].aadt == 120);

        m = merge_short_counts(counts, {{"X", 2022, 1}});
        CHECK(m.records.empty());
        CHECK(m.dropped == 3);

        m = merge_short_counts(counts, {{"A", 2022, 0}});
        CHECK(m.records.empty());

        CHECK_THROWS_AS(merge_short_counts(counts, {{"A", 2022, 1}, {"A", 2022, 2}}),
                        InvalidArgument);
    }

    TEST_CASE("valid-day filtering") {
        DailyCountMatrix m(2022);
        DailySeries& full = m.row("full");
        for (int d = 1; d <= kDaysPerYear; ++d) full.set(d, 1);
        m.row("empty");
        m.row("holiday").set(185, 10);

        const ValidDayCalendar cal = build_valid_day_calendar(2022);
        const DailyCountMatrix f = filter_to_valid_days(m, cal);
        for (int d = 1; d <= kDaysPerYear; ++d) {
            CHECK(f.find("full")->has(d) == cal.is_valid(d));
        }
        CHECK(f.find("empty")->observed_count() == 0);
        CHECK(f.find("holiday")->observed_count() == 0);
        CHECK_THROWS_AS(filter_to_valid_days(m, build_valid_day_calendar(2023)), InvalidArgument);
    }

    TEST_CASE("staged round trip") {
        TempDir dir("staged");
        StagedDataset ds;
        StationRecord s;
        s.latitude = 30.123456;
        s.longitude = -97.5;
        s.functional_class = FunctionalClass::MinorArterial;
        s.station_id = make_station_id(s.latitude, s.longitude, s.functional_class);
        s.lanes = 4;
        s.area_type = AreaType::Urban;
        s.year = 2022;
        ds.stations.push_back(s);
        DailyCountMatrix m(2022);
        m.row(s.station_id).set(186, 1234.5);
        ds.matrices.emplace(2022, m);
        ShortCountRecord r;
        r.station_id = "x";
        r.year = 2022;
        r.day_of_year = 186;
        r.observed_count = 10;
        r.aadt = 12;
        ds.short_counts.push_back(r);

        write_staged(dir.path(), ds);
        const StagedDataset back = read_staged(dir.path());
        REQUIRE(back.stations.size() == 1);
        CHECK(back.stations[0].station_id == s.station_id);
        CHECK(back.stations[0].lanes == 4);
        const DailySeries* row = back.matrices.at(2022).find(s.station_id);
        REQUIRE(row);
        CHECK(row->observed_count() == 1);
        CHECK(row->at(186) == 1234.5);
        REQUIRE(back.short_counts.size() == 1);
        CHECK(back.short_counts[0].aadt == 12);

        TempDir empty("staged_empty");
        CHECK_THROWS_AS(read_staged(empty.path()), UsageError);
    }
}
