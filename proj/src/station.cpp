#include "optday/station.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

namespace {

std::string normalize(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (c == ' ' || c == '-' || c == '_') {
            if (!out.empty() && out.back() != '_') out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

constexpr std::array<std::string_view, 7> kClassNames = {
    "interstate",     "other_freeway",   "other_principal_arterial", "minor_arterial",
    "major_collector", "minor_collector", "local",
};

constexpr std::array<std::string_view, 4> kAreaNames = {"rural", "small_urban", "urban",
                                                        "large_urban"};

}  // namespace

FunctionalClass parse_functional_class(std::string_view raw) {
    const std::string key = normalize(raw);
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (key == kClassNames[i] || key == std::to_string(i + 1)) {
            return static_cast<FunctionalClass>(i);
        }
    }
    if (key == "other_freeways_and_expressways" || key == "other_freeway_expressway") {
        return FunctionalClass::OtherFreeway;
    }
    throw InvalidArgument(fmt::format("unknown functional class '{}'", raw));
}

std::string_view to_string(FunctionalClass fc) {
    return kClassNames[static_cast<std::size_t>(fc)];
}

AreaType parse_area_type(std::string_view raw) {
    const std::string key = normalize(raw);
    for (std::size_t i = 0; i < kAreaNames.size(); ++i) {
        if (key == kAreaNames[i]) return static_cast<AreaType>(i);
    }
    throw InvalidArgument(fmt::format("unknown area type '{}'", raw));
}

std::string_view to_string(AreaType area) { return kAreaNames[static_cast<std::size_t>(area)]; }

StationKind parse_station_kind(std::string_view raw) {
    const std::string key = normalize(raw);
    if (key == "continuous") return StationKind::Continuous;
    if (key == "short") return StationKind::Short;
    throw InvalidArgument(fmt::format("unknown station kind '{}'", raw));
}

std::string_view to_string(StationKind kind) {
    return kind == StationKind::Continuous ? "continuous" : "short";
}

std::string make_station_id(double latitude, double longitude, FunctionalClass fc) {
    // Avoid "-0.000000" and "0.000000" naming the same point differently.
    auto clean = [](double v) { return v == 0.0 ? 0.0 : v; };
    return fmt::format("{:.6f}|{:.6f}|{}", clean(latitude), clean(longitude), to_string(fc));
}

std::string to_string(const StationKey& key) {
    return fmt::format("{}@{}", key.station_id, key.year);
}

std::size_t DailySeries::slot(int day) {
    if (day < 1 || day > kDaysPerYear) {
        throw InvalidArgument(fmt::format("day of year {} out of range 1..365", day));
    }
    return static_cast<std::size_t>(day - 1);
}

void DailySeries::set(int day, double volume) {
    if (!std::isfinite(volume) || volume < 0.0) {
        throw InvalidArgument(fmt::format("station {} day {}: volume {} must be finite and >= 0",
                                          station_id, day, volume));
    }
    values[slot(day)] = volume;
    observed.set(slot(day));
}

void DailySeries::clear(int day) {
    values[slot(day)] = 0.0;
    observed.reset(slot(day));
}

DailyCountMatrix::DailyCountMatrix(int year) : year_(year) {
    if (is_leap_year(year)) throw LeapYearError(year);
}

DailySeries& DailyCountMatrix::row(const std::string& station_id) {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), station_id,
                               [](const DailySeries& r, const std::string& id) {
                                   return r.station_id < id;
                               });
    if (it != rows_.end() && it->station_id == station_id) return *it;
    DailySeries fresh;
    fresh.station_id = station_id;
    return *rows_.insert(it, std::move(fresh));
}

const DailySeries* DailyCountMatrix::find(std::string_view station_id) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), station_id,
                               [](const DailySeries& r, std::string_view id) {
                                   return r.station_id < id;
                               });
    if (it != rows_.end() && it->station_id == station_id) return &*it;
    return nullptr;
}

DailySeries* DailyCountMatrix::find(std::string_view station_id) {
    return const_cast<DailySeries*>(std::as_const(*this).find(station_id));
}

StationRecord station_of(const ShortCountRecord& record) {
    StationRecord s;
    s.station_id = record.station_id;
    s.latitude = record.latitude;
    s.longitude = record.longitude;
    s.functional_class = record.functional_class;
    s.lanes = record.lanes;
    s.area_type = record.area_type;
    s.kind = StationKind::Short;
    s.year = record.year;
    return s;
}

}  // namespace optday
