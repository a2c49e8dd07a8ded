#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loglens::ingest {

inline constexpr std::int64_t kMsPerDay = 86'400'000;

enum class Level { Debug, Info, Warning, Error };

std::string_view level_name(Level level);

// One parsed log line:
//   HH:MM:SS.mmm [LAYER] Level Content
// PHY-style lines carry a subframe and channel before the content:
//   HH:MM:SS.mmm [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...
struct LogRecord {
  std::int64_t timestamp_ms = 0;  // milliseconds since midnight
  std::string layer;
  Level level = Level::Info;
  std::optional<int> subframe;
  std::optional<std::string> channel;
  std::string content;  // raw, non-empty at parse time
};

// All normalized content sharing one grouping key; the embedding unit.
struct EventGroup {
  std::int64_t timestamp_ms = 0;  // first contributing record's timestamp
  std::int64_t elapsed_s = 0;     // whole seconds since the file's first record
  std::string text;               // alphanumeric tokens separated by single spaces
  std::size_t record_count = 0;   // contributing records
};

struct ParseStats {
  std::size_t parsed_records = 0;
  std::size_t continuation_lines = 0;  // appended to the preceding record
  std::size_t skipped_lines = 0;       // no preceding record to attach to
  std::size_t unknown_levels = 0;      // mapped to Info
};

struct ProfilingDocument {
  std::string source_path;
  std::vector<LogRecord> records;  // file order
  std::vector<EventGroup> groups;  // ascending elapsed time
  ParseStats stats;
};

enum class GroupBy { Millisecond, Second };

// Parses one line. Returns nullopt for anything outside the grammar
// (continuation lines, hex dumps, banners, blanks); those are not errors.
std::optional<LogRecord> parse_line(std::string_view line, ParseStats* stats = nullptr);

// Replaces every non-alphanumeric byte with a space, collapses runs and
// trims. Case is preserved.
std::string normalize_content(std::string_view content);

// Groups records by timestamp (or by elapsed second). Timestamps that wrap
// past midnight are shifted by +24h; runs are assumed shorter than a day.
std::vector<EventGroup> group_records(const std::vector<LogRecord>& records,
                                      GroupBy mode = GroupBy::Millisecond);

ProfilingDocument parse_text(std::string_view text, std::string source_path,
                             GroupBy mode = GroupBy::Millisecond);
ProfilingDocument parse_file(const std::string& path, GroupBy mode = GroupBy::Millisecond);

// Renders a record back into the line grammar (layer padded to 4 chars).
std::string format_record(const LogRecord& rec);

// Sidecar: one JSON object per group ({"timestamp_ms":..,"elapsed_s":..,"text":..}).
void write_groups_jsonl(const ProfilingDocument& doc, const std::string& path);
std::vector<EventGroup> read_groups_jsonl(const std::string& path);

}  // namespace loglens::ingest
