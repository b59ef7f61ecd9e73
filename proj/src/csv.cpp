#include "optday/csv.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday::csv {

std::vector<std::string> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

Reader::Reader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw SchemaError(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        header_ = split_line(line);
        for (auto& h : header_) {
            h.erase(0, h.find_first_not_of(" \t\xEF\xBB\xBF"));
            h.erase(h.find_last_not_of(" \t") + 1);
        }
        return;
    }
    throw SchemaError(fmt::format("'{}' is empty (no header)", path.string()));
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
    auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header_.begin());
}

std::size_t Reader::require(std::string_view name) const {
    if (auto c = column(name)) return *c;
    throw SchemaError(
        fmt::format("'{}': missing required column '{}'", path_.string(), name));
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        fields = split_line(line);
        return true;
    }
    return false;
}

Writer::Writer(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw Error(fmt::format("cannot write '{}'", path.string()));
}

void Writer::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << '\n';
}

}  // namespace optday::csv
