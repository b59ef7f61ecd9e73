#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optday/calendar.hpp"
#include "optday/station.hpp"

namespace optday {

struct LongCountRow {
    std::string station_id;
    Date date;
    std::optional<int> hour;  // empty for a daily total
    double volume = 0.0;
};

struct RejectRow {
    std::string input_file;
    std::size_t line_number = 0;
    std::string reason;
};

struct AttributeRow {
    std::string station_id;
    std::optional<int> lanes;
    std::optional<AreaType> area_type;
};

struct AadtRecord {
    std::string station_id;
    int year = 0;
    double aadt = 0.0;
};

struct StudyBox {
    double min_latitude = -90.0;
    double max_latitude = 90.0;
    double min_longitude = -180.0;
    double max_longitude = 180.0;

    bool contains(double latitude, double longitude) const;
};

enum class CountSchema { Continuous, Short, Attributes, Aadt };

struct IngestOptions {
    StudyBox box;
    // Fills lanes/area_type when a station file leaves them blank.
    std::map<std::string, AttributeRow> attributes;
};

// Everything one file yields. Only the members matching the schema are
// populated. Malformed rows land in `rejects` with a reason; a missing
// required column throws SchemaError.
struct ParsedFile {
    CountSchema schema = CountSchema::Continuous;
    std::vector<LongCountRow> counts;
    std::vector<StationRecord> stations;  // continuous: one per (station, year)
    std::vector<ShortCountRecord> short_counts;
    std::vector<AttributeRow> attributes;
    std::vector<AadtRecord> aadt;
    std::vector<RejectRow> rejects;
};

ParsedFile parse_count_file(const std::filesystem::path& path, CountSchema schema,
                            const IngestOptions& options = {});

struct StationDate {
    std::string station_id;
    Date date;

    auto operator<=>(const StationDate&) const = default;
};

struct DailyAggregation {
    std::vector<LongCountRow> daily;      // one per complete (station, date)
    std::vector<StationDate> incomplete;  // hourly coverage < 24
};

// Sums hourly rows into daily totals; daily rows pass through. Throws
// InvalidArgument when a station-date mixes hourly and daily rows or repeats
// an hour.
DailyAggregation aggregate_hourly_to_daily(const std::vector<LongCountRow>& rows);

// Wide matrix for `year`; `station_ids` adds stations that have no rows.
// Throws on rows from another year or a repeated (station, day).
DailyCountMatrix pivot_to_wide(const std::vector<LongCountRow>& daily, int year,
                               const std::vector<std::string>& station_ids = {});

// Observed cells back to daily rows, ordered by station then day.
std::vector<LongCountRow> unpivot(const DailyCountMatrix& matrix);

struct MergeResult {
    std::vector<ShortCountRecord> records;
    std::size_t dropped = 0;
};

// Inner join on (station_id, year). Counts without a matching, positive AADT
// are dropped. Throws InvalidArgument on a repeated key in `aadt_table`.
MergeResult merge_short_counts(const std::vector<ShortCountRecord>& counts,
                               const std::vector<AadtRecord>& aadt_table);

// Distinct (station_id, year, aadt) carried on short-count rows. Throws when
// one key carries two different AADT values.
std::vector<AadtRecord> aadt_table_from_short_counts(const std::vector<ShortCountRecord>& counts);

// Masks out every invalid day. Throws on a year mismatch.
DailyCountMatrix filter_to_valid_days(const DailyCountMatrix& matrix,
                                      const ValidDayCalendar& calendar);

struct ShortFilterResult {
    std::vector<ShortCountRecord> records;
    std::size_t dropped = 0;
};

ShortFilterResult filter_short_to_valid_days(const std::vector<ShortCountRecord>& records);

// Cleaned, merged data ready for modelling.
struct StagedDataset {
    std::vector<StationRecord> stations;  // continuous, sorted by key
    std::map<int, DailyCountMatrix> matrices;
    std::vector<ShortCountRecord> short_counts;
};

struct IngestInputs {
    std::filesystem::path continuous;
    std::optional<std::filesystem::path> short_counts;
    std::optional<std::filesystem::path> attributes;
    std::optional<std::filesystem::path> aadt;
};

struct IngestReport {
    std::size_t continuous_rows = 0;
    std::size_t incomplete_days = 0;
    std::size_t short_rows = 0;
    std::size_t short_invalid_day = 0;
    std::size_t short_unmatched = 0;
    std::vector<RejectRow> rejects;
};

struct IngestResult {
    StagedDataset dataset;
    IngestReport report;
};

IngestResult ingest_files(const IngestInputs& inputs, const IngestOptions& options);

// Staged layout: stations.csv, daily_<year>.csv (wide, blank = missing),
// short_counts.csv.
void write_staged(const std::filesystem::path& dir, const StagedDataset& dataset);
StagedDataset read_staged(const std::filesystem::path& dir);

void write_rejects(const std::filesystem::path& path, const std::vector<RejectRow>& rejects);

}  // namespace optday
