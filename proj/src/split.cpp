#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "optday/error.hpp"
#include "optday/hash.hpp"
#include "optday/pipeline.hpp"

namespace optday {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string_view to_string(Subset subset) {
    switch (subset) {
        case Subset::Train:
            return "train";
        case Subset::Validation:
            return "validation";
        case Subset::Test:
            return "test";
    }
    return "?";
}

std::optional<Subset> SplitAssignment::find(const StationKey& key) const {
    auto it = subsets.find(key);
    if (it == subsets.end()) return std::nullopt;
    return it->second;
}

std::size_t SplitAssignment::count(Subset subset) const {
    return static_cast<std::size_t>(std::count_if(
        subsets.begin(), subsets.end(), [&](const auto& kv) { return kv.second == subset; }));
}

std::string SplitAssignment::fingerprint() const {
    Fingerprint fp;
    for (const auto& [key, subset] : subsets) {
        fp.update(key.station_id);
        fp.update(static_cast<std::int64_t>(key.year));
        fp.update(static_cast<std::int64_t>(subset));
    }
    return fp.hex();
}

namespace {

// Largest-remainder apportionment of n over (train, test, validation).
std::array<std::size_t, 3> apportion(std::size_t n, const SplitFractions& f) {
    const std::array<double, 3> quota = {f.train * static_cast<double>(n),
                                         f.test * static_cast<double>(n),
                                         f.validation * static_cast<double>(n)};
    std::array<std::size_t, 3> counts{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        counts[i] = static_cast<std::size_t>(std::floor(quota[i] + 1e-9));
        assigned += counts[i];
    }
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - static_cast<double>(counts[a]) > quota[b] - static_cast<double>(counts[b]) + 1e-9;
    });
    for (std::size_t i = 0; assigned < n; i = (i + 1) % 3, ++assigned) ++counts[order[i]];
    return counts;
}

}  // namespace

SplitAssignment stratified_split(const std::map<StationKey, int>& clusters, std::uint64_t seed,
                                 const SplitFractions& fractions, int test_year) {
    const double total = fractions.train + fractions.validation + fractions.test;
    if (fractions.train < 0 || fractions.validation < 0 || fractions.test < 0 ||
        std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("split fractions must be non-negative and sum to 1");
    }
    std::map<int, std::vector<StationKey>> members;
    for (const auto& [key, label] : clusters) members[label].push_back(key);

    std::vector<int> without_test_year;
    for (const auto& [label, keys] : members) {
        if (std::none_of(keys.begin(), keys.end(),
                         [&](const StationKey& k) { return k.year == test_year; })) {
            without_test_year.push_back(label);
        }
    }
    if (!without_test_year.empty()) {
        throw InvalidArgument(fmt::format("cluster(s) [{}] have no {} station to draw test rows from",
                                          fmt::join(without_test_year, ", "), test_year));
    }

    SplitAssignment out;
    out.test_year = test_year;
    for (const auto& [label, keys] : members) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
        auto [n_train, n_test, n_validation] = apportion(keys.size(), fractions);

        std::vector<StationKey> eligible, others;
        for (const auto& k : keys) (k.year == test_year ? eligible : others).push_back(k);
        if (n_test > eligible.size()) {
            n_train += n_test - eligible.size();
            n_test = eligible.size();
        }
        std::shuffle(eligible.begin(), eligible.end(), rng);
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            if (i < n_test) {
                out.subsets[eligible[i]] = Subset::Test;
            } else {
                others.push_back(eligible[i]);
            }
        }
        std::sort(others.begin(), others.end());
        std::shuffle(others.begin(), others.end(), rng);
        for (std::size_t i = 0; i < others.size(); ++i) {
            out.subsets[others[i]] = i < n_train ? Subset::Train : Subset::Validation;
        }
        (void)n_validation;
    }
    return out;
}

}  // namespace optday
