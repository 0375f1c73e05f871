#pragma once

// Locale-independent helpers shared by the file readers and writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infsl::text {

/// "%.17g" in the C locale; round-trips every finite double exactly.
std::string format_double(double v);
/// Shortest text that reads back as the same double.
std::string format_short(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Splits on `sep` without trimming; "a,,b" gives three fields.
std::vector<std::string_view> split(std::string_view line, char sep);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace infsl::text
