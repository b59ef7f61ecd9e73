#pragma once

#include <bitset>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optday/calendar.hpp"
#include "optday/matrix.hpp"
#include "optday/station.hpp"

namespace optday {

enum class CombinedClass { Arterial = 0, Collector = 1 };
enum class AreaGroup { Rural = 0, Urban = 1 };

CombinedClass combine_functional_class(FunctionalClass fc);
CombinedClass combine_functional_class(std::string_view raw);
AreaGroup group_area_type(AreaType area);
AreaGroup group_area_type(std::string_view raw);

std::string_view to_string(CombinedClass c);
std::string_view to_string(AreaGroup a);

// Stations are "similar" when they share year, combined class and area group.
struct GroupKey {
    int year = 0;
    CombinedClass combined_class = CombinedClass::Arterial;
    AreaGroup area_group = AreaGroup::Rural;

    auto operator<=>(const GroupKey&) const = default;
};

GroupKey group_key(const StationRecord& station);

// One contributor to a group's leave-one-out pool: a continuous station's
// daily series or a short-count station's handful of observed days.
struct PoolMember {
    std::string station_id;
    std::array<double, kDaysPerYear> values{};
    std::bitset<kDaysPerYear> observed;

    bool has(int day) const { return observed.test(static_cast<std::size_t>(day - 1)); }
    double at(int day) const { return values[static_cast<std::size_t>(day - 1)]; }
};

using GroupPools = std::map<GroupKey, std::vector<PoolMember>>;

// Mean of the day-`day` counts of every pool member other than `target`;
// empty when no other member observed that day.
std::optional<double> loo_day_specific_average(std::string_view target, int day,
                                               std::span<const PoolMember> pool);

// Sum of every other member's counts over the calendar's valid days divided by
// the number of contributing (station, day) observations.
std::optional<double> loo_all_valid_days_average(std::string_view target,
                                                 std::span<const PoolMember> pool,
                                                 const ValidDayCalendar& calendar);

// Pools for one year. Continuous series contribute their observed days;
// short-count records contribute their single day (a repeated station/day
// keeps the first record).
GroupPools build_group_pools(std::span<const StationRecord> continuous,
                             const DailyCountMatrix& matrix,
                             std::span<const ShortCountRecord> short_counts);

struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;  // population; 0 for constant columns

    FeatureMatrix apply(const FeatureMatrix& columns) const;
};

struct Standardized {
    FeatureMatrix values;
    Standardization transform;
};

// Column z-scores with population standard deviation; constant columns map to
// zero. Throws InvalidArgument on non-finite input.
Standardized standardize(const FeatureMatrix& columns);

struct KMeansResult {
    std::vector<int> labels;
    std::vector<std::vector<double>> centroids;
    // Within-cluster sum of squares after each assignment step.
    std::vector<double> inertia_trace;
    int iterations = 0;
};

// k-means++ seeding then Lloyd iterations until the assignment stops changing
// or `max_iterations` is reached. An empty cluster is re-seeded at the point
// farthest from its current centroid. Throws when rows < k.
KMeansResult kmeans(const FeatureMatrix& rows, int k, std::uint64_t seed,
                    int max_iterations = 300);

inline const std::vector<std::string> kClusterColumns = {
    "year", "latitude", "longitude", "combined_class", "lanes", "area_group"};

FeatureMatrix cluster_attributes(std::span<const StationRecord> stations);

struct ClusterAssignment {
    std::map<StationKey, int> labels;
    int k = 0;
    std::vector<std::vector<double>> centroids;  // standardized space
    KMeansResult fit;
};

// Clusters the union of continuous and short stations on standardized
// attributes. Duplicate keys are clustered once.
ClusterAssignment cluster_stations(std::span<const StationRecord> stations, int k,
                                   std::uint64_t seed);

struct DaySpecific {
    int day = 0;
};
struct AllValidDays {};
using Scenario = std::variant<DaySpecific, AllValidDays>;

inline const std::vector<std::string> kModelFeatures = {
    "year", "latitude", "longitude", "combined_class", "lanes", "area_group", "loo_feature"};

struct FeatureRow {
    StationKey key;
    int year = 0;
    double latitude = 0.0;
    double longitude = 0.0;
    int combined_class = 0;
    int lanes = 0;
    int area_group = 0;
    std::optional<double> loo_feature;
    std::optional<double> target_log;

    std::array<double, 7> features() const;
};

// Everything the feature builder needs for one study year: continuous
// stations, their valid-day-filtered (and imputed) matrix, the LOO pools and
// the AADT targets.
struct YearData {
    int year = 0;
    ValidDayCalendar calendar;
    std::vector<StationRecord> continuous;
    DailyCountMatrix matrix;
    GroupPools pools;
    std::map<std::string, double> aadt;  // by station_id
};

YearData prepare_year(std::vector<StationRecord> continuous, DailyCountMatrix filtered_matrix,
                      std::span<const ShortCountRecord> short_counts,
                      std::map<std::string, double> aadt);

struct FeatureRows {
    std::vector<FeatureRow> rows;
    std::size_t unavailable = 0;
};

// One row per continuous station. Rows whose LOO feature is unavailable are
// kept with an empty loo_feature and counted. Throws InvalidArgument for a
// DaySpecific day that is not valid in the year.
FeatureRows build_feature_rows(const YearData& data, const Scenario& scenario);

FeatureMatrix to_feature_matrix(std::span<const FeatureRow* const> rows);

}  // namespace optday
