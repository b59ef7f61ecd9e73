#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace optday {

// 64-bit FNV-1a. Used for dataset and split fingerprints in run manifests.
class Fingerprint {
public:
    void update(std::string_view bytes);
    void update(double value);
    void update(std::int64_t value);

    std::uint64_t value() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace optday
