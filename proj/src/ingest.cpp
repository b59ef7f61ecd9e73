#include "optday/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "optday/csv.hpp"
#include "optday/error.hpp"

namespace optday {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

// Thrown inside row parsing; turned into a reject entry.
struct RowReject {
    std::string reason;
};

class RowView {
public:
    RowView(const std::vector<std::string>& fields) : fields_(fields) {}

    std::string_view get(std::size_t column) const {
        return column < fields_.size() ? trim(fields_[column]) : std::string_view{};
    }

    double number(std::size_t column, std::string_view what) const {
        const auto text = get(column);
        if (text.empty()) throw RowReject{fmt::format("missing {}", what)};
        auto v = parse_number<double>(text);
        if (!v || !std::isfinite(*v)) throw RowReject{fmt::format("unparsable {}", what)};
        return *v;
    }

    std::optional<int> optional_int(std::size_t column, std::string_view what) const {
        const auto text = get(column);
        if (text.empty()) return std::nullopt;
        auto v = parse_number<int>(text);
        if (!v) throw RowReject{fmt::format("unparsable {}", what)};
        return v;
    }

private:
    const std::vector<std::string>& fields_;
};

struct StationColumns {
    std::size_t station_id, latitude, longitude, functional_class, lanes, area_type, date;
};

StationColumns station_columns(const csv::Reader& rd) {
    return {rd.require("station_id"), rd.require("latitude"),  rd.require("longitude"),
            rd.require("functional_class"), rd.require("lanes"), rd.require("area_type"),
            rd.require("date")};
}

// Shared static-attribute parsing for continuous and short rows.
struct ParsedStation {
    StationRecord station;
    Date date;
};

ParsedStation parse_station(const RowView& row, const StationColumns& c,
                            const IngestOptions& options) {
    ParsedStation out;
    StationRecord& s = out.station;
    s.latitude = row.number(c.latitude, "latitude");
    s.longitude = row.number(c.longitude, "longitude");
    if (!options.box.contains(s.latitude, s.longitude)) {
        throw RowReject{"coordinates outside study box"};
    }
    try {
        s.functional_class = parse_functional_class(row.get(c.functional_class));
    } catch (const InvalidArgument&) {
        throw RowReject{fmt::format("unknown functional class '{}'", row.get(c.functional_class))};
    }
    const std::string canonical = make_station_id(s.latitude, s.longitude, s.functional_class);
    const auto given = row.get(c.station_id);
    if (!given.empty() && given != canonical) {
        throw RowReject{fmt::format("station_id '{}' does not match coordinates and class ({})",
                                    given, canonical)};
    }
    s.station_id = canonical;

    const AttributeRow* fallback = nullptr;
    if (auto it = options.attributes.find(canonical); it != options.attributes.end()) {
        fallback = &it->second;
    }
    std::optional<int> lanes = row.optional_int(c.lanes, "lanes");
    if (!lanes && fallback) lanes = fallback->lanes;
    if (!lanes) throw RowReject{"missing lanes"};
    if (*lanes < 1) throw RowReject{"lanes must be >= 1"};
    s.lanes = *lanes;

    const auto area_text = row.get(c.area_type);
    if (!area_text.empty()) {
        try {
            s.area_type = parse_area_type(area_text);
        } catch (const InvalidArgument&) {
            throw RowReject{fmt::format("unknown area type '{}'", area_text)};
        }
    } else if (fallback && fallback->area_type) {
        s.area_type = *fallback->area_type;
    } else {
        throw RowReject{"missing area_type"};
    }

    try {
        out.date = parse_iso_date(row.get(c.date));
    } catch (const InvalidArgument&) {
        throw RowReject{fmt::format("invalid date '{}'", row.get(c.date))};
    }
    s.year = static_cast<int>(out.date.year());
    if (is_leap_year(s.year)) throw RowReject{"leap year"};
    return out;
}

double parse_volume(const RowView& row, std::size_t column, std::string_view what) {
    const double v = row.number(column, what);
    if (v < 0.0) throw RowReject{fmt::format("negative {}", what)};
    return v;
}

bool same_attributes(const StationRecord& a, const StationRecord& b) {
    return a.lanes == b.lanes && a.area_type == b.area_type;
}

void parse_continuous(csv::Reader& rd, const IngestOptions& options, ParsedFile& out) {
    const StationColumns c = station_columns(rd);
    const std::size_t volume = rd.require("volume");
    const auto hour_col = rd.column("hour");

    std::map<StationKey, std::size_t> station_index;
    std::set<std::tuple<std::string, Date, int>> seen;
    std::vector<std::string> fields;
    while (rd.next(fields)) {
        try {
            if (fields.size() != rd.header().size()) {
                throw RowReject{fmt::format("expected {} fields, got {}", rd.header().size(),
                                            fields.size())};
            }
            const RowView row(fields);
            ParsedStation ps = parse_station(row, c, options);
            LongCountRow count;
            count.station_id = ps.station.station_id;
            count.date = ps.date;
            if (hour_col) {
                count.hour = row.optional_int(*hour_col, "hour");
                if (count.hour && (*count.hour < 0 || *count.hour > 23)) {
                    throw RowReject{"hour out of range 0..23"};
                }
            }
            count.volume = parse_volume(row, volume, "volume");
            if (!seen.emplace(count.station_id, count.date, count.hour.value_or(-1)).second) {
                throw RowReject{"duplicate row"};
            }
            const StationKey key = key_of(ps.station);
            auto [it, inserted] = station_index.try_emplace(key, out.stations.size());
            if (inserted) {
                out.stations.push_back(ps.station);
            } else if (!same_attributes(out.stations[it->second], ps.station)) {
                throw RowReject{"conflicting station attributes"};
            }
            out.counts.push_back(std::move(count));
        } catch (const RowReject& r) {
            out.rejects.push_back({rd.path().string(), rd.line_number(), r.reason});
        }
    }
}

void parse_short(csv::Reader& rd, const IngestOptions& options, ParsedFile& out) {
    const StationColumns c = station_columns(rd);
    const std::size_t volume = rd.require("volume_24h");
    const std::size_t aadt = rd.require("aadt");
    std::vector<std::string> fields;
    while (rd.next(fields)) {
        try {
            if (fields.size() != rd.header().size()) {
                throw RowReject{fmt::format("expected {} fields, got {}", rd.header().size(),
                                            fields.size())};
            }
            const RowView row(fields);
            ParsedStation ps = parse_station(row, c, options);
            ShortCountRecord r;
            r.station_id = ps.station.station_id;
            r.latitude = ps.station.latitude;
            r.longitude = ps.station.longitude;
            r.functional_class = ps.station.functional_class;
            r.lanes = ps.station.lanes;
            r.area_type = ps.station.area_type;
            r.year = ps.station.year;
            r.day_of_year = day_of_year(ps.date);
            r.observed_count = parse_volume(row, volume, "volume_24h");
            r.aadt = row.get(aadt).empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : row.number(aadt, "aadt");
            out.short_counts.push_back(std::move(r));
        } catch (const RowReject& r) {
            out.rejects.push_back({rd.path().string(), rd.line_number(), r.reason});
        }
    }
}

void parse_attributes(csv::Reader& rd, ParsedFile& out) {
    const std::size_t id = rd.require("station_id");
    const std::size_t lanes = rd.require("lanes");
    const std::size_t area = rd.require("area_type");
    std::set<std::string> seen;
    std::vector<std::string> fields;
    while (rd.next(fields)) {
        try {
            const RowView row(fields);
            AttributeRow a;
            a.station_id = std::string(row.get(id));
            if (a.station_id.empty()) throw RowReject{"missing station_id"};
            a.lanes = row.optional_int(lanes, "lanes");
            if (a.lanes && *a.lanes < 1) throw RowReject{"lanes must be >= 1"};
            if (!row.get(area).empty()) {
                try {
                    a.area_type = parse_area_type(row.get(area));
                } catch (const InvalidArgument&) {
                    throw RowReject{fmt::format("unknown area type '{}'", row.get(area))};
                }
            }
            if (!seen.insert(a.station_id).second) throw RowReject{"duplicate station_id"};
            out.attributes.push_back(std::move(a));
        } catch (const RowReject& r) {
            out.rejects.push_back({rd.path().string(), rd.line_number(), r.reason});
        }
    }
}

void parse_aadt(csv::Reader& rd, ParsedFile& out) {
    const std::size_t id = rd.require("station_id");
    const std::size_t year = rd.require("year");
    const std::size_t aadt = rd.require("aadt");
    std::vector<std::string> fields;
    while (rd.next(fields)) {
        try {
            const RowView row(fields);
            AadtRecord a;
            a.station_id = std::string(row.get(id));
            if (a.station_id.empty()) throw RowReject{"missing station_id"};
            const auto y = row.optional_int(year, "year");
            if (!y) throw RowReject{"missing year"};
            a.year = *y;
            a.aadt = row.number(aadt, "aadt");
            out.aadt.push_back(std::move(a));
        } catch (const RowReject& r) {
            out.rejects.push_back({rd.path().string(), rd.line_number(), r.reason});
        }
    }
}

}  // namespace

bool StudyBox::contains(double latitude, double longitude) const {
    return latitude >= min_latitude && latitude <= max_latitude && longitude >= min_longitude &&
           longitude <= max_longitude;
}

ParsedFile parse_count_file(const std::filesystem::path& path, CountSchema schema,
                            const IngestOptions& options) {
    csv::Reader rd(path);
    ParsedFile out;
    out.schema = schema;
    switch (schema) {
        case CountSchema::Continuous:
            parse_continuous(rd, options, out);
            break;
        case CountSchema::Short:
            parse_short(rd, options, out);
            break;
        case CountSchema::Attributes:
            parse_attributes(rd, out);
            break;
        case CountSchema::Aadt:
            parse_aadt(rd, out);
            break;
    }
    return out;
}

DailyAggregation aggregate_hourly_to_daily(const std::vector<LongCountRow>& rows) {
    struct Accumulator {
        std::bitset<24> hours;
        double hourly_sum = 0.0;
        std::optional<double> daily;
    };
    std::map<StationDate, Accumulator> groups;
    for (const LongCountRow& r : rows) {
        Accumulator& acc = groups[{r.station_id, r.date}];
        const std::string where = fmt::format("{} on {}", r.station_id, format_iso_date(r.date));
        if (r.hour) {
            if (acc.daily) throw InvalidArgument("mixed hourly and daily rows for " + where);
            if (*r.hour < 0 || *r.hour > 23) throw InvalidArgument("hour out of range for " + where);
            if (acc.hours.test(static_cast<std::size_t>(*r.hour))) {
                throw InvalidArgument(fmt::format("repeated hour {} for {}", *r.hour, where));
            }
            acc.hours.set(static_cast<std::size_t>(*r.hour));
            acc.hourly_sum += r.volume;
        } else {
            if (acc.hours.any()) throw InvalidArgument("mixed hourly and daily rows for " + where);
            if (acc.daily) throw InvalidArgument("repeated daily row for " + where);
            acc.daily = r.volume;
        }
    }
    DailyAggregation out;
    for (auto& [key, acc] : groups) {
        if (acc.daily) {
            out.daily.push_back({key.station_id, key.date, std::nullopt, *acc.daily});
        } else if (acc.hours.all()) {
            out.daily.push_back({key.station_id, key.date, std::nullopt, acc.hourly_sum});
        } else {
            out.incomplete.push_back(key);
        }
    }
    return out;
}

DailyCountMatrix pivot_to_wide(const std::vector<LongCountRow>& daily, int year,
                               const std::vector<std::string>& station_ids) {
    DailyCountMatrix matrix(year);
    for (const auto& id : station_ids) matrix.row(id);
    for (const LongCountRow& r : daily) {
        if (static_cast<int>(r.date.year()) != year) {
            throw InvalidArgument(fmt::format("row for {} on {} is not in {}", r.station_id,
                                              format_iso_date(r.date), year));
        }
        if (r.hour) throw InvalidArgument("pivot_to_wide expects daily rows");
        DailySeries& series = matrix.row(r.station_id);
        const int day = day_of_year(r.date);
        if (series.has(day)) {
            throw InvalidArgument(
                fmt::format("duplicate daily value for {} day {}", r.station_id, day));
        }
        series.set(day, r.volume);
    }
    return matrix;
}

std::vector<LongCountRow> unpivot(const DailyCountMatrix& matrix) {
    std::vector<LongCountRow> out;
    for (const DailySeries& s : matrix.rows()) {
        for (int day = 1; day <= kDaysPerYear; ++day) {
            if (!s.has(day)) continue;
            out.push_back({s.station_id, date_from_day_of_year(matrix.year(), day), std::nullopt,
                           s.at(day)});
        }
    }
    return out;
}

MergeResult merge_short_counts(const std::vector<ShortCountRecord>& counts,
                               const std::vector<AadtRecord>& aadt_table) {
    std::map<StationKey, double> table;
    for (const AadtRecord& a : aadt_table) {
        if (!table.try_emplace({a.station_id, a.year}, a.aadt).second) {
            throw InvalidArgument(fmt::format("duplicate AADT entry for {} in {}", a.station_id,
                                              a.year));
        }
    }
    MergeResult out;
    for (const ShortCountRecord& r : counts) {
        auto it = table.find({r.station_id, r.year});
        if (it == table.end() || !std::isfinite(it->second) || it->second <= 0.0) {
            ++out.dropped;
            continue;
        }
        ShortCountRecord merged = r;
        merged.aadt = it->second;
        out.records.push_back(std::move(merged));
    }
    return out;
}

std::vector<AadtRecord> aadt_table_from_short_counts(const std::vector<ShortCountRecord>& counts) {
    std::map<StationKey, double> table;
    for (const ShortCountRecord& r : counts) {
        if (std::isnan(r.aadt)) continue;
        auto [it, inserted] = table.try_emplace({r.station_id, r.year}, r.aadt);
        if (!inserted && it->second != r.aadt) {
            throw InvalidArgument(fmt::format("conflicting AADT values for {} in {}: {} vs {}",
                                              r.station_id, r.year, it->second, r.aadt));
        }
    }
    std::vector<AadtRecord> out;
    out.reserve(table.size());
    for (const auto& [key, aadt] : table) out.push_back({key.station_id, key.year, aadt});
    return out;
}

DailyCountMatrix filter_to_valid_days(const DailyCountMatrix& matrix,
                                      const ValidDayCalendar& calendar) {
    if (matrix.year() != calendar.year()) {
        throw InvalidArgument(fmt::format("matrix year {} does not match calendar year {}",
                                          matrix.year(), calendar.year()));
    }
    DailyCountMatrix out = matrix;
    for (DailySeries& s : out.rows()) {
        for (int day = 1; day <= kDaysPerYear; ++day) {
            if (!calendar.is_valid(day)) s.clear(day);
        }
    }
    return out;
}

ShortFilterResult filter_short_to_valid_days(const std::vector<ShortCountRecord>& records) {
    std::map<int, ValidDayCalendar> calendars;
    ShortFilterResult out;
    for (const ShortCountRecord& r : records) {
        auto it = calendars.find(r.year);
        if (it == calendars.end()) it = calendars.emplace(r.year, build_valid_day_calendar(r.year)).first;
        if (it->second.is_valid(r.day_of_year)) {
            out.records.push_back(r);
        } else {
            ++out.dropped;
        }
    }
    return out;
}

IngestResult ingest_files(const IngestInputs& inputs, const IngestOptions& base_options) {
    IngestResult result;
    IngestReport& report = result.report;
    IngestOptions options = base_options;
    auto take_rejects = [&](ParsedFile& f) {
        report.rejects.insert(report.rejects.end(), f.rejects.begin(), f.rejects.end());
    };

    if (inputs.attributes) {
        ParsedFile attrs = parse_count_file(*inputs.attributes, CountSchema::Attributes);
        take_rejects(attrs);
        for (auto& a : attrs.attributes) options.attributes[a.station_id] = a;
    }

    ParsedFile continuous = parse_count_file(inputs.continuous, CountSchema::Continuous, options);
    take_rejects(continuous);
    report.continuous_rows = continuous.counts.size();
    DailyAggregation daily = aggregate_hourly_to_daily(continuous.counts);
    report.incomplete_days = daily.incomplete.size();

    StagedDataset& ds = result.dataset;
    ds.stations = std::move(continuous.stations);
    std::sort(ds.stations.begin(), ds.stations.end(),
              [](const StationRecord& a, const StationRecord& b) { return key_of(a) < key_of(b); });

    std::map<int, std::vector<LongCountRow>> by_year;
    for (auto& r : daily.daily) by_year[static_cast<int>(r.date.year())].push_back(std::move(r));
    std::map<int, std::vector<std::string>> ids_by_year;
    for (const auto& s : ds.stations) ids_by_year[s.year].push_back(s.station_id);
    for (const auto& [year, ids] : ids_by_year) {
        ds.matrices.emplace(year, pivot_to_wide(by_year[year], year, ids));
    }

    if (inputs.short_counts) {
        ParsedFile shorts = parse_count_file(*inputs.short_counts, CountSchema::Short, options);
        take_rejects(shorts);
        report.short_rows = shorts.short_counts.size();
        ShortFilterResult valid = filter_short_to_valid_days(shorts.short_counts);
        report.short_invalid_day = valid.dropped;

        std::vector<AadtRecord> table;
        if (inputs.aadt) {
            ParsedFile aadt = parse_count_file(*inputs.aadt, CountSchema::Aadt);
            take_rejects(aadt);
            table = std::move(aadt.aadt);
        } else {
            table = aadt_table_from_short_counts(valid.records);
        }
        MergeResult merged = merge_short_counts(valid.records, table);
        report.short_unmatched = merged.dropped;
        ds.short_counts = std::move(merged.records);
    }
    return result;
}

void write_staged(const std::filesystem::path& dir, const StagedDataset& dataset) {
    std::filesystem::create_directories(dir);
    {
        csv::Writer w(dir / "stations.csv");
        w.row({"station_id", "latitude", "longitude", "functional_class", "lanes", "area_type",
               "kind", "year"});
        for (const StationRecord& s : dataset.stations) {
            w.row({s.station_id, fmt::format("{}", s.latitude), fmt::format("{}", s.longitude),
                   std::string(to_string(s.functional_class)), std::to_string(s.lanes),
                   std::string(to_string(s.area_type)), std::string(to_string(s.kind)),
                   std::to_string(s.year)});
        }
    }
    for (const auto& [year, matrix] : dataset.matrices) {
        csv::Writer w(dir / fmt::format("daily_{}.csv", year));
        std::vector<std::string> header{"station_id"};
        for (int d = 1; d <= kDaysPerYear; ++d) header.push_back(fmt::format("d{:03}", d));
        w.row(header);
        for (const DailySeries& s : matrix.rows()) {
            std::vector<std::string> row{s.station_id};
            for (int d = 1; d <= kDaysPerYear; ++d) {
                row.push_back(s.has(d) ? fmt::format("{}", s.at(d)) : std::string{});
            }
            w.row(row);
        }
    }
    csv::Writer w(dir / "short_counts.csv");
    w.row({"station_id", "latitude", "longitude", "functional_class", "lanes", "area_type", "year",
           "day_of_year", "volume_24h", "aadt"});
    for (const ShortCountRecord& r : dataset.short_counts) {
        w.row({r.station_id, fmt::format("{}", r.latitude), fmt::format("{}", r.longitude),
               std::string(to_string(r.functional_class)), std::to_string(r.lanes),
               std::string(to_string(r.area_type)), std::to_string(r.year),
               std::to_string(r.day_of_year), fmt::format("{}", r.observed_count),
               fmt::format("{}", r.aadt)});
    }
}

namespace {

template <typename T>
T staged_number(const csv::Reader& rd, std::string_view text, std::string_view what) {
    auto v = parse_number<T>(text);
    if (!v) {
        throw SchemaError(fmt::format("{} line {}: bad {} '{}'", rd.path().string(),
                                      rd.line_number(), what, text));
    }
    return *v;
}

template <typename Fn>
auto staged_enum(const csv::Reader& rd, std::string_view text, Fn parse) {
    try {
        return parse(text);
    } catch (const InvalidArgument& e) {
        throw SchemaError(fmt::format("{} line {}: {}", rd.path().string(), rd.line_number(),
                                      e.what()));
    }
}

}  // namespace

StagedDataset read_staged(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir / "stations.csv")) {
        throw UsageError(fmt::format("no staged dataset in '{}' (run ingest first)", dir.string()));
    }
    StagedDataset ds;
    std::vector<std::string> f;
    {
        csv::Reader rd(dir / "stations.csv");
        const auto id = rd.require("station_id"), lat = rd.require("latitude"),
                   lon = rd.require("longitude"), fc = rd.require("functional_class"),
                   lanes = rd.require("lanes"), area = rd.require("area_type"),
                   kind = rd.require("kind"), year = rd.require("year");
        while (rd.next(f)) {
            if (f.size() != rd.header().size()) {
                throw SchemaError(fmt::format("{} line {}: wrong field count", rd.path().string(),
                                              rd.line_number()));
            }
            StationRecord s;
            s.station_id = f[id];
            s.latitude = staged_number<double>(rd, f[lat], "latitude");
            s.longitude = staged_number<double>(rd, f[lon], "longitude");
            s.functional_class = staged_enum(rd, f[fc], parse_functional_class);
            s.lanes = staged_number<int>(rd, f[lanes], "lanes");
            s.area_type = staged_enum(rd, f[area], parse_area_type);
            s.kind = staged_enum(rd, f[kind], parse_station_kind);
            s.year = staged_number<int>(rd, f[year], "year");
            ds.stations.push_back(std::move(s));
        }
    }
    std::set<int> years;
    for (const auto& s : ds.stations) years.insert(s.year);
    for (int year : years) {
        csv::Reader rd(dir / fmt::format("daily_{}.csv", year));
        const auto id = rd.require("station_id");
        std::vector<std::size_t> day_cols;
        for (int d = 1; d <= kDaysPerYear; ++d) day_cols.push_back(rd.require(fmt::format("d{:03}", d)));
        DailyCountMatrix matrix(year);
        while (rd.next(f)) {
            if (f.size() != rd.header().size()) {
                throw SchemaError(fmt::format("{} line {}: wrong field count", rd.path().string(),
                                              rd.line_number()));
            }
            DailySeries& s = matrix.row(f[id]);
            for (int d = 1; d <= kDaysPerYear; ++d) {
                const std::string& cell = f[day_cols[static_cast<std::size_t>(d - 1)]];
                if (!trim(cell).empty()) s.set(d, staged_number<double>(rd, cell, "volume"));
            }
        }
        ds.matrices.emplace(year, std::move(matrix));
    }
    if (std::filesystem::exists(dir / "short_counts.csv")) {
        csv::Reader rd(dir / "short_counts.csv");
        const auto id = rd.require("station_id"), lat = rd.require("latitude"),
                   lon = rd.require("longitude"), fc = rd.require("functional_class"),
                   lanes = rd.require("lanes"), area = rd.require("area_type"),
                   year = rd.require("year"), doy = rd.require("day_of_year"),
                   vol = rd.require("volume_24h"), aadt = rd.require("aadt");
        while (rd.next(f)) {
            if (f.size() != rd.header().size()) {
                throw SchemaError(fmt::format("{} line {}: wrong field count", rd.path().string(),
                                              rd.line_number()));
            }
            ShortCountRecord r;
            r.station_id = f[id];
            r.latitude = staged_number<double>(rd, f[lat], "latitude");
            r.longitude = staged_number<double>(rd, f[lon], "longitude");
            r.functional_class = staged_enum(rd, f[fc], parse_functional_class);
            r.lanes = staged_number<int>(rd, f[lanes], "lanes");
            r.area_type = staged_enum(rd, f[area], parse_area_type);
            r.year = staged_number<int>(rd, f[year], "year");
            r.day_of_year = staged_number<int>(rd, f[doy], "day_of_year");
            r.observed_count = staged_number<double>(rd, f[vol], "volume_24h");
            r.aadt = staged_number<double>(rd, f[aadt], "aadt");
            ds.short_counts.push_back(std::move(r));
        }
    }
    return ds;
}

void write_rejects(const std::filesystem::path& path, const std::vector<RejectRow>& rejects) {
    csv::Writer w(path);
    w.row({"input_file", "line_number", "reason"});
    for (const RejectRow& r : rejects) {
        w.row({r.input_file, std::to_string(r.line_number), r.reason});
    }
}

}  // namespace optday
