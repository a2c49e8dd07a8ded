#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loglens {

// Reads a whole file; throws IoError if it cannot be opened.
std::string read_text_file(const std::string& path);
// Writes atomically enough for our purposes (truncate + write); throws IoError.
void write_text_file(const std::string& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' on each line. A trailing empty
// line from a final newline is not returned.
std::vector<std::string_view> split_lines(std::string_view text);

// Shortest-round-trip double formatting for CSV sidecars.
std::string format_double(double v);

// Minimal CSV with quoting only when a field needs it.
std::string csv_escape(std::string_view field);
std::vector<std::string> parse_csv_line(std::string_view line);

std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

void ensure_dir(const std::string& path);

}  // namespace loglens
