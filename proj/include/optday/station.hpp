#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "optday/calendar.hpp"

namespace optday {

enum class FunctionalClass {
    Interstate,
    OtherFreeway,
    OtherPrincipalArterial,
    MinorArterial,
    MajorCollector,
    MinorCollector,
    Local,
};

enum class AreaType { Rural, SmallUrban, Urban, LargeUrban };

enum class StationKind { Continuous, Short };

// Accepts the snake_case names ("minor_arterial"), the same words separated
// by spaces or hyphens in any case, and the HPMS numeric codes 1..7.
FunctionalClass parse_functional_class(std::string_view raw);
std::string_view to_string(FunctionalClass fc);

// "rural", "small_urban", "urban", "large_urban" (same separator rules).
AreaType parse_area_type(std::string_view raw);
std::string_view to_string(AreaType area);

StationKind parse_station_kind(std::string_view raw);
std::string_view to_string(StationKind kind);

// "<lat 6dp>|<lon 6dp>|<functional class name>".
std::string make_station_id(double latitude, double longitude, FunctionalClass fc);

struct StationRecord {
    std::string station_id;
    double latitude = 0.0;
    double longitude = 0.0;
    FunctionalClass functional_class = FunctionalClass::Local;
    int lanes = 1;
    AreaType area_type = AreaType::Rural;
    StationKind kind = StationKind::Continuous;
    int year = 0;
};

// A station is observed once per study year; (station_id, year) identifies a
// model row.
struct StationKey {
    std::string station_id;
    int year = 0;

    auto operator<=>(const StationKey&) const = default;
};

inline StationKey key_of(const StationRecord& s) { return {s.station_id, s.year}; }
std::string to_string(const StationKey& key);

// One station's year of daily volumes. Day arguments are 1-based.
struct DailySeries {
    std::string station_id;
    std::array<double, kDaysPerYear> values{};
    std::bitset<kDaysPerYear> observed;

    bool has(int day) const { return observed.test(slot(day)); }
    double at(int day) const { return values[slot(day)]; }
    void set(int day, double volume);
    void clear(int day);
    int observed_count() const { return static_cast<int>(observed.count()); }

    static std::size_t slot(int day);
};

// Wide-format daily counts for one calendar year, rows ordered by station_id.
class DailyCountMatrix {
public:
    explicit DailyCountMatrix(int year);

    int year() const { return year_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    const std::vector<DailySeries>& rows() const { return rows_; }
    std::vector<DailySeries>& rows() { return rows_; }

    // Returns the existing row or inserts an all-missing one.
    DailySeries& row(const std::string& station_id);
    const DailySeries* find(std::string_view station_id) const;
    DailySeries* find(std::string_view station_id);

private:
    int year_;
    std::vector<DailySeries> rows_;
};

struct ShortCountRecord {
    std::string station_id;
    double latitude = 0.0;
    double longitude = 0.0;
    FunctionalClass functional_class = FunctionalClass::Local;
    int lanes = 1;
    AreaType area_type = AreaType::Rural;
    int year = 0;
    int day_of_year = 0;
    double observed_count = 0.0;
    // Published AADT; NaN until merged with an AADT table.
    double aadt = 0.0;
};

StationRecord station_of(const ShortCountRecord& record);

}  // namespace optday
