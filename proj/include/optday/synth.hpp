#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "optday/features.hpp"
#include "optday/ingest.hpp"
#include "optday/station.hpp"

namespace optday {

// Day X whose volumes are pulled toward each station's own annual level.
struct GroupDaySignal {
    int day = 186;
    double strength = 0.9;  // 0 leaves the day untouched, 1 sets it to the level
};

struct VolumeRange {
    double low = 0.0;
    double high = 0.0;
};

struct SynthConfig {
    std::size_t n_continuous = 630;  // station-years, alternating over `years`
    std::size_t n_short = 1000;
    std::vector<int> years{2022, 2023};
    std::uint64_t seed = 42;

    double seasonal_amplitude = 0.15;
    double summer_bump = 0.05;
    // Monday..Sunday multipliers.
    std::array<double, 7> weekday_profile{1.0, 1.0, 1.0, 1.02, 1.08, 0.9, 0.8};
    // Per-station Fri..Sun multiplier is drawn from 1 +/- this spread.
    double weekend_spread = 0.25;
    double noise_sigma = 0.05;
    // Share of each continuous station's valid-day cells left unobserved.
    double missing_fraction = 0.05;
    std::optional<GroupDaySignal> group_day_signal;

    std::vector<std::pair<FunctionalClass, double>> class_mix{
        {FunctionalClass::Interstate, 0.10},     {FunctionalClass::OtherFreeway, 0.05},
        {FunctionalClass::OtherPrincipalArterial, 0.15}, {FunctionalClass::MinorArterial, 0.20},
        {FunctionalClass::MajorCollector, 0.25}, {FunctionalClass::MinorCollector, 0.15},
        {FunctionalClass::Local, 0.10}};
    std::vector<std::pair<AreaType, double>> area_mix{{AreaType::Rural, 0.45},
                                                      {AreaType::SmallUrban, 0.15},
                                                      {AreaType::Urban, 0.25},
                                                      {AreaType::LargeUrban, 0.15}};
    // Base volume drawn log-uniformly from the range of the station's group.
    std::map<std::pair<CombinedClass, AreaGroup>, VolumeRange> volume_ranges{
        {{CombinedClass::Arterial, AreaGroup::Urban}, {15000.0, 60000.0}},
        {{CombinedClass::Arterial, AreaGroup::Rural}, {4000.0, 25000.0}},
        {{CombinedClass::Collector, AreaGroup::Urban}, {1500.0, 12000.0}},
        {{CombinedClass::Collector, AreaGroup::Rural}, {200.0, 3000.0}}};
    StudyBox box{29.0, 33.0, -99.0, -95.0};

    // Throws InvalidArgument describing the first violated constraint.
    void validate() const;
};

struct SynthStation {
    StationRecord record;
    double base = 0.0;
};

// Continuous stations first, then short-count stations.
std::vector<SynthStation> generate_network(const SynthConfig& config);

struct SynthData {
    StagedDataset staged;
    std::vector<AadtRecord> truth;  // continuous and short stations
};

SynthData generate_counts(const std::vector<SynthStation>& stations, const SynthConfig& config);

inline SynthData generate(const SynthConfig& config) {
    return generate_counts(generate_network(config), config);
}

// continuous.csv, short.csv and aadt_truth.csv in the ingest layouts.
void write_synth_csv(const std::filesystem::path& dir, const SynthData& data);

}  // namespace optday
