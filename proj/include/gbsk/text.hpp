#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gbsk {

/// Shortest form is not attempted: always 17 significant digits, so every
/// double round-trips.
std::string format_double(double x);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

/// CSV field, double-quoted when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);
/// Splits one CSV line on commas outside double quotes and unquotes fields.
std::vector<std::string> split_csv(std::string_view line);

/// Strict whole-field parses; return false on any trailing garbage.
bool parse_int(std::string_view s, long long &out);
bool parse_double(std::string_view s, double &out);

/// Lines with trailing whitespace removed and trailing blank lines dropped.
/// Throws MissingFile when the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path &path);

}  // namespace gbsk
