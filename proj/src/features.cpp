#include "optday/features.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

CombinedClass combine_functional_class(FunctionalClass fc) {
    switch (fc) {
        case FunctionalClass::Interstate:
        case FunctionalClass::OtherFreeway:
        case FunctionalClass::OtherPrincipalArterial:
        case FunctionalClass::MinorArterial:
            return CombinedClass::Arterial;
        case FunctionalClass::MajorCollector:
        case FunctionalClass::MinorCollector:
        case FunctionalClass::Local:
            return CombinedClass::Collector;
    }
    throw InvalidArgument("unknown functional class");
}

CombinedClass combine_functional_class(std::string_view raw) {
    return combine_functional_class(parse_functional_class(raw));
}

AreaGroup group_area_type(AreaType area) {
    switch (area) {
        case AreaType::Rural:
            return AreaGroup::Rural;
        case AreaType::SmallUrban:
        case AreaType::Urban:
        case AreaType::LargeUrban:
            return AreaGroup::Urban;
    }
    throw InvalidArgument("unknown area type");
}

AreaGroup group_area_type(std::string_view raw) { return group_area_type(parse_area_type(raw)); }

std::string_view to_string(CombinedClass c) {
    return c == CombinedClass::Arterial ? "arterial" : "collector";
}

std::string_view to_string(AreaGroup a) { return a == AreaGroup::Rural ? "rural" : "urban"; }

GroupKey group_key(const StationRecord& station) {
    return {station.year, combine_functional_class(station.functional_class),
            group_area_type(station.area_type)};
}

std::optional<double> loo_day_specific_average(std::string_view target, int day,
                                               std::span<const PoolMember> pool) {
    if (day < 1 || day > kDaysPerYear) return std::nullopt;
    double sum = 0.0;
    std::size_t contributors = 0;
    for (const PoolMember& member : pool) {
        if (member.station_id == target || !member.has(day)) continue;
        sum += member.at(day);
        ++contributors;
    }
    if (contributors == 0) return std::nullopt;
    return sum / static_cast<double>(contributors);
}

std::optional<double> loo_all_valid_days_average(std::string_view target,
                                                 std::span<const PoolMember> pool,
                                                 const ValidDayCalendar& calendar) {
    double sum = 0.0;
    std::size_t observations = 0;
    for (int day = 1; day <= kDaysPerYear; ++day) {
        if (!calendar.is_valid(day)) continue;
        for (const PoolMember& member : pool) {
            if (member.station_id == target || !member.has(day)) continue;
            sum += member.at(day);
            ++observations;
        }
    }
    if (observations == 0) return std::nullopt;
    return sum / static_cast<double>(observations);
}

GroupPools build_group_pools(std::span<const StationRecord> continuous,
                             const DailyCountMatrix& matrix,
                             std::span<const ShortCountRecord> short_counts) {
    GroupPools pools;
    for (const StationRecord& s : continuous) {
        if (s.year != matrix.year()) {
            throw InvalidArgument(fmt::format("station {} is from {}, matrix is {}", s.station_id,
                                              s.year, matrix.year()));
        }
        PoolMember member;
        member.station_id = s.station_id;
        if (const DailySeries* series = matrix.find(s.station_id)) {
            member.values = series->values;
            member.observed = series->observed;
        }
        pools[group_key(s)].push_back(std::move(member));
    }

    std::map<std::pair<GroupKey, std::string>, std::size_t> short_index;
    for (const ShortCountRecord& r : short_counts) {
        if (r.year != matrix.year()) continue;
        const GroupKey key = group_key(station_of(r));
        auto& members = pools[key];
        auto [it, inserted] = short_index.try_emplace({key, r.station_id}, members.size());
        if (inserted) {
            PoolMember member;
            member.station_id = r.station_id;
            members.push_back(std::move(member));
        }
        PoolMember& member = members[it->second];
        const auto slot = static_cast<std::size_t>(r.day_of_year - 1);
        if (r.day_of_year < 1 || r.day_of_year > kDaysPerYear || member.observed.test(slot)) {
            continue;
        }
        member.values[slot] = r.observed_count;
        member.observed.set(slot);
    }
    return pools;
}

FeatureMatrix Standardization::apply(const FeatureMatrix& columns) const {
    if (columns.n_cols() != mean.size()) {
        throw InvalidArgument("standardization column count mismatch");
    }
    FeatureMatrix out(columns.names);
    out.n_rows = columns.n_rows;
    out.values.resize(columns.values.size());
    for (std::size_t r = 0; r < columns.n_rows; ++r) {
        for (std::size_t c = 0; c < columns.n_cols(); ++c) {
            out.at(r, c) = stddev[c] > 0.0 ? (columns.at(r, c) - mean[c]) / stddev[c] : 0.0;
        }
    }
    return out;
}

Standardized standardize(const FeatureMatrix& columns) {
    const std::size_t n = columns.n_rows;
    const std::size_t m = columns.n_cols();
    for (double v : columns.values) {
        if (!std::isfinite(v)) throw InvalidArgument("standardize: non-finite input");
    }
    Standardization t;
    t.mean.assign(m, 0.0);
    t.stddev.assign(m, 0.0);
    if (n > 0) {
        for (std::size_t c = 0; c < m; ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < n; ++r) sum += columns.at(r, c);
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            bool constant = true;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = columns.at(r, c) - mean;
                ss += d * d;
                constant = constant && columns.at(r, c) == columns.at(0, c);
            }
            t.mean[c] = mean;
            t.stddev[c] = constant ? 0.0 : std::sqrt(ss / static_cast<double>(n));
        }
    }
    FeatureMatrix z = t.apply(columns);
    return {std::move(z), std::move(t)};
}

FeatureMatrix cluster_attributes(std::span<const StationRecord> stations) {
    FeatureMatrix m(kClusterColumns);
    for (const StationRecord& s : stations) {
        const std::array<double, 6> row = {
            static_cast<double>(s.year),
            s.latitude,
            s.longitude,
            static_cast<double>(combine_functional_class(s.functional_class)),
            static_cast<double>(s.lanes),
            static_cast<double>(group_area_type(s.area_type)),
        };
        m.add_row(row);
    }
    return m;
}

ClusterAssignment cluster_stations(std::span<const StationRecord> stations, int k,
                                   std::uint64_t seed) {
    std::vector<StationRecord> unique;
    std::map<StationKey, bool> seen;
    for (const StationRecord& s : stations) {
        if (seen.try_emplace(key_of(s), true).second) unique.push_back(s);
    }
    const Standardized z = standardize(cluster_attributes(unique));
    ClusterAssignment out;
    out.k = k;
    out.fit = kmeans(z.values, k, seed);
    out.centroids = out.fit.centroids;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        out.labels[key_of(unique[i])] = out.fit.labels[i];
    }
    return out;
}

std::array<double, 7> FeatureRow::features() const {
    return {static_cast<double>(year),
            latitude,
            longitude,
            static_cast<double>(combined_class),
            static_cast<double>(lanes),
            static_cast<double>(area_group),
            loo_feature.value_or(0.0)};
}

YearData prepare_year(std::vector<StationRecord> continuous, DailyCountMatrix filtered_matrix,
                      std::span<const ShortCountRecord> short_counts,
                      std::map<std::string, double> aadt) {
    const int year = filtered_matrix.year();
    GroupPools pools = build_group_pools(continuous, filtered_matrix, short_counts);
    return YearData{year,
                    build_valid_day_calendar(year),
                    std::move(continuous),
                    std::move(filtered_matrix),
                    std::move(pools),
                    std::move(aadt)};
}

FeatureRows build_feature_rows(const YearData& data, const Scenario& scenario) {
    if (const auto* ds = std::get_if<DaySpecific>(&scenario)) {
        if (!data.calendar.is_valid(ds->day)) {
            throw InvalidArgument(
                fmt::format("day {} is not a valid count day in {}", ds->day, data.year));
        }
    }
    FeatureRows out;
    out.rows.reserve(data.continuous.size());
    for (const StationRecord& s : data.continuous) {
        FeatureRow row;
        row.key = key_of(s);
        row.year = s.year;
        row.latitude = s.latitude;
        row.longitude = s.longitude;
        row.combined_class = static_cast<int>(combine_functional_class(s.functional_class));
        row.lanes = s.lanes;
        row.area_group = static_cast<int>(group_area_type(s.area_type));

        auto pool_it = data.pools.find(group_key(s));
        std::span<const PoolMember> pool;
        if (pool_it != data.pools.end()) pool = pool_it->second;
        if (const auto* ds = std::get_if<DaySpecific>(&scenario)) {
            row.loo_feature = loo_day_specific_average(s.station_id, ds->day, pool);
        } else {
            row.loo_feature = loo_all_valid_days_average(s.station_id, pool, data.calendar);
        }
        if (!row.loo_feature) ++out.unavailable;

        if (auto it = data.aadt.find(s.station_id); it != data.aadt.end()) {
            row.target_log = std::log1p(it->second);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

FeatureMatrix to_feature_matrix(std::span<const FeatureRow* const> rows) {
    FeatureMatrix m(kModelFeatures);
    m.values.reserve(rows.size() * kModelFeatures.size());
    for (const FeatureRow* row : rows) {
        const auto values = row->features();
        m.add_row(values);
    }
    return m;
}

}  // namespace optday
