#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optday::csv {

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes;
// embedded newlines are not supported.
std::vector<std::string> split_line(std::string_view line);

// Quotes a field only when it needs it.
std::string escape(std::string_view field);

class Reader {
public:
    // Reads the header line. Throws SchemaError if the file cannot be opened or
    // is empty.
    explicit Reader(const std::filesystem::path& path);

    const std::vector<std::string>& header() const { return header_; }
    std::optional<std::size_t> column(std::string_view name) const;
    // Throws SchemaError naming the missing column.
    std::size_t require(std::string_view name) const;

    // Next non-blank record; false at end of file.
    bool next(std::vector<std::string>& fields);
    std::size_t line_number() const { return line_number_; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::vector<std::string> header_;
    std::size_t line_number_ = 0;
};

class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

}  // namespace optday::csv
