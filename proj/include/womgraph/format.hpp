#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>

namespace womgraph {

// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

// Strict full-string parse; returns false on any trailing garbage.
inline bool parse_double(std::string_view text, double &value) {
    if (text.empty())
        return false;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && end == text.data() + text.size();
}

// Writes `content` to a sibling temporary file and renames it over `path`, so a
// failed run never leaves a partial file behind.
void write_file_atomically(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

} // namespace womgraph
