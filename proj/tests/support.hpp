#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>

#include "optday/matrix.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("optday_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline optday::FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                           double lo = 0.0, double hi = 1.0) {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < cols; ++c) names.push_back("x" + std::to_string(c));
    optday::FeatureMatrix m(names);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> row(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (double& v : row) v = u(rng);
        m.add_row(row);
    }
    return m;
}

}  // namespace testing
