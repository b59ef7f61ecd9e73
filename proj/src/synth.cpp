#include "optday/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "optday/csv.hpp"
#include "optday/error.hpp"
#include "optday/pipeline.hpp"

namespace optday {

namespace {

constexpr std::uint64_t kCountStream = 0x636f756e7473ULL;

template <class T>
T draw_weighted(const std::vector<std::pair<T, double>>& mix, std::mt19937_64& rng) {
    double total = 0.0;
    for (const auto& [value, weight] : mix) total += weight;
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    for (const auto& [value, weight] : mix) {
        if (u < weight) return value;
        u -= weight;
    }
    return mix.back().first;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

int draw_lanes(CombinedClass c, std::mt19937_64& rng) {
    static constexpr std::array<int, 4> arterial{2, 4, 6, 8};
    static constexpr std::array<int, 2> collector{2, 4};
    if (c == CombinedClass::Arterial) {
        return arterial[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    }
    return collector[std::uniform_int_distribution<std::size_t>(0, 1)(rng)];
}

double season(const SynthConfig& config, int day) {
    const double angle = 2.0 * std::numbers::pi * (day - 80) / kDaysPerYear;
    const double summer = (day - 196) / 30.0;
    return 1.0 + config.seasonal_amplitude * std::sin(angle) +
           config.summer_bump * std::exp(-summer * summer);
}

// 1 = Monday .. 7 = Sunday.
unsigned iso_weekday(int year, int day) {
    return std::chrono::weekday(std::chrono::sys_days(date_from_day_of_year(year, day)))
        .iso_encoding();
}

}  // namespace

void SynthConfig::validate() const {
    if (years.empty()) throw InvalidArgument("synth: years must not be empty");
    for (int y : years) {
        if (is_leap_year(y)) throw LeapYearError(y);
    }
    auto unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v < 1.0)) {
            throw InvalidArgument(fmt::format("synth: {} must lie in [0, 1), got {}", name, v));
        }
    };
    unit(seasonal_amplitude, "seasonal_amplitude");
    unit(summer_bump, "summer_bump");
    unit(noise_sigma, "noise_sigma");
    unit(weekend_spread, "weekend_spread");
    unit(missing_fraction, "missing_fraction");
    for (double m : weekday_profile) {
        if (!(m > 0.0)) throw InvalidArgument("synth: weekday multipliers must be > 0");
    }
    if (group_day_signal) {
        if (group_day_signal->day < 1 || group_day_signal->day > kDaysPerYear) {
            throw InvalidArgument("synth: group_day_signal day must be in 1..365");
        }
        if (!(group_day_signal->strength >= 0.0 && group_day_signal->strength <= 1.0)) {
            throw InvalidArgument("synth: group_day_signal strength must be in [0, 1]");
        }
    }
    if (class_mix.empty() || area_mix.empty()) {
        throw InvalidArgument("synth: class and area mixes must not be empty");
    }
    for (const auto& [fc, w] : class_mix) {
        if (!(w >= 0.0)) throw InvalidArgument("synth: class weights must be >= 0");
    }
    for (const auto& [area, w] : area_mix) {
        if (!(w >= 0.0)) throw InvalidArgument("synth: area weights must be >= 0");
    }
    if (volume_ranges.empty()) throw InvalidArgument("synth: volume_ranges must not be empty");
    for (const auto& [group, range] : volume_ranges) {
        if (!(range.low > 0.0 && range.high >= range.low)) {
            throw InvalidArgument("synth: volume ranges need 0 < low <= high");
        }
    }
    if (box.min_latitude >= box.max_latitude || box.min_longitude >= box.max_longitude) {
        throw InvalidArgument("synth: study box is empty");
    }
}

std::vector<SynthStation> generate_network(const SynthConfig& config) {
    config.validate();
    if (config.n_continuous == 0) throw InvalidArgument("synth: n_continuous must be > 0");

    std::vector<SynthStation> out;
    std::set<StationKey> used;
    const std::size_t total = config.n_continuous + config.n_short;
    for (std::size_t i = 0; i < total; ++i) {
        const bool continuous = i < config.n_continuous;
        const std::size_t local = continuous ? i : i - config.n_continuous;
        std::mt19937_64 rng(derive_seed(config.seed, i));
        SynthStation s;
        StationRecord& r = s.record;
        r.kind = continuous ? StationKind::Continuous : StationKind::Short;
        r.year = config.years[local % config.years.size()];
        r.functional_class = draw_weighted(config.class_mix, rng);
        r.area_type = draw_weighted(config.area_mix, rng);
        const CombinedClass cc = combine_functional_class(r.functional_class);
        r.lanes = draw_lanes(cc, rng);

        auto range = config.volume_ranges.find({cc, group_area_type(r.area_type)});
        if (range == config.volume_ranges.end()) {
            throw InvalidArgument(fmt::format("synth: no volume range for {} {}", to_string(cc),
                                              to_string(group_area_type(r.area_type))));
        }
        std::uniform_real_distribution<double> log_u(std::log(range->second.low),
                                                     std::log(range->second.high));
        s.base = std::exp(log_u(rng));

        std::uniform_real_distribution<double> lat(config.box.min_latitude, config.box.max_latitude);
        std::uniform_real_distribution<double> lon(config.box.min_longitude,
                                                   config.box.max_longitude);
        do {
            r.latitude = round6(lat(rng));
            r.longitude = round6(lon(rng));
            r.station_id = make_station_id(r.latitude, r.longitude, r.functional_class);
        } while (!used.insert(key_of(r)).second);
        out.push_back(std::move(s));
    }
    return out;
}

SynthData generate_counts(const std::vector<SynthStation>& stations, const SynthConfig& config) {
    config.validate();
    if (stations.empty()) throw InvalidArgument("synth: no stations");

    std::map<int, ValidDayCalendar> calendars;
    std::map<int, std::array<unsigned, kDaysPerYear>> weekdays;
    for (const SynthStation& s : stations) {
        const int y = s.record.year;
        if (calendars.contains(y)) continue;
        calendars.emplace(y, build_valid_day_calendar(y));
        auto& w = weekdays[y];
        for (int d = 1; d <= kDaysPerYear; ++d) w[static_cast<std::size_t>(d - 1)] = iso_weekday(y, d);
    }

    SynthData data;
    for (const SynthStation& s : stations) {
        if (s.record.kind == StationKind::Continuous && !data.staged.matrices.contains(s.record.year)) {
            data.staged.matrices.emplace(s.record.year, DailyCountMatrix(s.record.year));
        }
    }

    const std::uint64_t count_seed = derive_seed(config.seed, kCountStream);
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const StationRecord& r = stations[i].record;
        std::mt19937_64 rng(derive_seed(count_seed, i));
        std::normal_distribution<double> noise(0.0, 1.0);
        const double weekend =
            1.0 + config.weekend_spread * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        const auto& wd = weekdays.at(r.year);

        std::array<double, kDaysPerYear> v{};
        for (int d = 1; d <= kDaysPerYear; ++d) {
            const unsigned iso = wd[static_cast<std::size_t>(d - 1)];
            double f = config.weekday_profile[iso - 1];
            if (iso >= 5) f *= weekend;
            const double eps = config.noise_sigma > 0.0 ? config.noise_sigma * noise(rng) : 0.0;
            v[static_cast<std::size_t>(d - 1)] =
                std::round(std::max(0.0, stations[i].base * season(config, d) * f * (1.0 + eps)));
        }
        if (config.group_day_signal) {
            const auto x = static_cast<std::size_t>(config.group_day_signal->day - 1);
            const double rho = config.group_day_signal->strength;
            const double level =
                (std::accumulate(v.begin(), v.end(), 0.0) - v[x]) / (kDaysPerYear - 1);
            v[x] = std::round(rho * level + (1.0 - rho) * v[x]);
        }
        const double aadt = std::accumulate(v.begin(), v.end(), 0.0) / kDaysPerYear;
        data.truth.push_back({r.station_id, r.year, aadt});

        const ValidDayCalendar& cal = calendars.at(r.year);
        if (r.kind == StationKind::Continuous) {
            data.staged.stations.push_back(r);
            DailySeries& row = data.staged.matrices.at(r.year).row(r.station_id);
            for (int d = 1; d <= kDaysPerYear; ++d) row.set(d, v[static_cast<std::size_t>(d - 1)]);
            if (config.missing_fraction > 0.0) {
                std::vector<int> valid = cal.valid_days();
                std::shuffle(valid.begin(), valid.end(), rng);
                const auto masked = static_cast<std::size_t>(
                    std::llround(config.missing_fraction * static_cast<double>(valid.size())));
                for (std::size_t k = 0; k < masked; ++k) row.clear(valid[k]);
            }
        } else {
            const std::vector<int> valid = cal.valid_days();
            const int day =
                valid[std::uniform_int_distribution<std::size_t>(0, valid.size() - 1)(rng)];
            ShortCountRecord sc;
            sc.station_id = r.station_id;
            sc.latitude = r.latitude;
            sc.longitude = r.longitude;
            sc.functional_class = r.functional_class;
            sc.lanes = r.lanes;
            sc.area_type = r.area_type;
            sc.year = r.year;
            sc.day_of_year = day;
            sc.observed_count = v[static_cast<std::size_t>(day - 1)];
            sc.aadt = aadt;
            data.staged.short_counts.push_back(std::move(sc));
        }
    }
    std::sort(data.staged.stations.begin(), data.staged.stations.end(),
              [](const StationRecord& a, const StationRecord& b) { return key_of(a) < key_of(b); });
    return data;
}

void write_synth_csv(const std::filesystem::path& dir, const SynthData& data) {
    std::filesystem::create_directories(dir);
    {
        csv::Writer w(dir / "continuous.csv");
        w.row({"station_id", "latitude", "longitude", "functional_class", "lanes", "area_type",
               "date", "hour", "volume"});
        for (const StationRecord& s : data.staged.stations) {
            const DailySeries* series = data.staged.matrices.at(s.year).find(s.station_id);
            for (int d = 1; d <= kDaysPerYear; ++d) {
                if (!series->has(d)) continue;
                w.row({s.station_id, fmt::format("{}", s.latitude), fmt::format("{}", s.longitude),
                       std::string(to_string(s.functional_class)), std::to_string(s.lanes),
                       std::string(to_string(s.area_type)),
                       format_iso_date(date_from_day_of_year(s.year, d)), "",
                       fmt::format("{}", series->at(d))});
            }
        }
    }
    {
        csv::Writer w(dir / "short.csv");
        w.row({"station_id", "latitude", "longitude", "functional_class", "lanes", "area_type",
               "date", "volume_24h", "aadt"});
        for (const ShortCountRecord& r : data.staged.short_counts) {
            w.row({r.station_id, fmt::format("{}", r.latitude), fmt::format("{}", r.longitude),
                   std::string(to_string(r.functional_class)), std::to_string(r.lanes),
                   std::string(to_string(r.area_type)),
                   format_iso_date(date_from_day_of_year(r.year, r.day_of_year)),
                   fmt::format("{}", r.observed_count), fmt::format("{}", r.aadt)});
        }
    }
    csv::Writer w(dir / "aadt_truth.csv");
    w.row({"station_id", "year", "aadt"});
    for (const AadtRecord& a : data.truth) {
        w.row({a.station_id, std::to_string(a.year), fmt::format("{}", a.aadt)});
    }
}

}  // namespace optday
