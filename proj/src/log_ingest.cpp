#include "loglens/log_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"

namespace loglens::ingest {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Alphanumeric per the ASCII table only; upper bytes of UTF-8 sequences are
// treated as separators so multi-byte input degrades to plain tokens.
bool is_alnum_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
  return true;
}

// HH:MM:SS.mmm, fixed width, with field range checks.
std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  if (s.size() != 12 || s[2] != ':' || s[5] != ':' || s[8] != '.') return std::nullopt;
  for (std::size_t i : {0u, 1u, 3u, 4u, 6u, 7u, 9u, 10u, 11u})
    if (!is_digit(s[i])) return std::nullopt;
  int hh = (s[0] - '0') * 10 + (s[1] - '0');
  int mm = (s[3] - '0') * 10 + (s[4] - '0');
  int ss = (s[6] - '0') * 10 + (s[7] - '0');
  int ms = (s[9] - '0') * 100 + (s[10] - '0') * 10 + (s[11] - '0');
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return ((std::int64_t(hh) * 60 + mm) * 60 + ss) * 1000 + ms;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// "[05788] PDSCH: rest" -> (5788, "PDSCH", "rest"). Both pieces must be
// present for the prefix to be consumed; otherwise content stays untouched.
void extract_subframe_channel(LogRecord& rec) {
  std::string_view s = rec.content;
  if (s.size() < 3 || s[0] != '[') return;
  std::size_t close = s.find(']');
  if (close == std::string_view::npos || close < 2) return;
  int value = 0;
  for (std::size_t i = 1; i < close; ++i) {
    if (!is_digit(s[i])) return;
    value = value * 10 + (s[i] - '0');
    if (value > 1'000'000) return;
  }
  std::string_view rest = trim(s.substr(close + 1));
  std::size_t colon = rest.find(':');
  if (colon == std::string_view::npos || colon == 0) return;
  std::string_view channel = rest.substr(0, colon);
  for (char c : channel)
    if (!is_alnum_byte(static_cast<unsigned char>(c)) && c != '_' && c != '-') return;
  std::string_view remainder = trim(rest.substr(colon + 1));
  if (remainder.empty()) return;
  rec.subframe = value;
  rec.channel = std::string(channel);
  rec.content = std::string(remainder);
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Debug: return "Debug";
    case Level::Info: return "Info";
    case Level::Warning: return "Warning";
    case Level::Error: return "Error";
  }
  return "Info";
}

std::optional<LogRecord> parse_line(std::string_view line, ParseStats* stats) {
  if (line.size() < 13) return std::nullopt;
  auto ts = parse_timestamp(line.substr(0, 12));
  if (!ts) return std::nullopt;
  std::string_view rest = line.substr(12);
  if (rest.empty() || rest[0] != ' ') return std::nullopt;
  rest = trim(rest);
  if (rest.empty() || rest[0] != '[') return std::nullopt;
  std::size_t close = rest.find(']');
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view layer = trim(rest.substr(1, close - 1));
  if (layer.empty()) return std::nullopt;

  std::string_view after = trim(rest.substr(close + 1));
  std::size_t sp = after.find(' ');
  std::string_view level_word = sp == std::string_view::npos ? after : after.substr(0, sp);
  if (level_word.empty()) return std::nullopt;

  LogRecord rec;
  rec.timestamp_ms = *ts;
  rec.layer = std::string(layer);
  if (iequals(level_word, "debug")) {
    rec.level = Level::Debug;
  } else if (iequals(level_word, "info")) {
    rec.level = Level::Info;
  } else if (iequals(level_word, "warning") || iequals(level_word, "warn")) {
    rec.level = Level::Warning;
  } else if (iequals(level_word, "error")) {
    rec.level = Level::Error;
  } else {
    rec.level = Level::Info;
    if (stats) ++stats->unknown_levels;
  }

  std::string_view content =
      sp == std::string_view::npos ? std::string_view{} : trim(after.substr(sp + 1));
  if (content.empty()) return std::nullopt;
  rec.content = std::string(content);
  extract_subframe_channel(rec);
  if (stats) ++stats->parsed_records;
  return rec;
}

std::string normalize_content(std::string_view content) {
  std::string out;
  out.reserve(content.size());
  bool pending_space = false;
  for (unsigned char c : content) {
    if (is_alnum_byte(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<EventGroup> group_records(const std::vector<LogRecord>& records, GroupBy mode) {
  std::vector<EventGroup> groups;
  if (records.empty()) return groups;

  const std::int64_t first = records.front().timestamp_ms;
  // Key: adjusted ms timestamp, or elapsed second. std::map keeps keys sorted,
  // which yields ascending elapsed time directly.
  std::map<std::int64_t, std::size_t> index;
  for (const auto& rec : records) {
    std::int64_t adjusted = rec.timestamp_ms;
    if (adjusted < first) adjusted += kMsPerDay;
    std::int64_t elapsed_s = (adjusted - first) / 1000;
    std::int64_t key = mode == GroupBy::Millisecond ? adjusted : elapsed_s;

    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) {
      EventGroup g;
      g.timestamp_ms = rec.timestamp_ms;
      g.elapsed_s = elapsed_s;
      groups.push_back(std::move(g));
    }
    EventGroup& g = groups[it->second];
    std::string norm = normalize_content(rec.content);
    if (!norm.empty()) {
      if (!g.text.empty()) g.text.push_back(' ');
      g.text += norm;
    }
    ++g.record_count;
  }

  std::sort(groups.begin(), groups.end(), [&](const EventGroup& a, const EventGroup& b) {
    std::int64_t ka = a.timestamp_ms < first ? a.timestamp_ms + kMsPerDay : a.timestamp_ms;
    std::int64_t kb = b.timestamp_ms < first ? b.timestamp_ms + kMsPerDay : b.timestamp_ms;
    return ka < kb;
  });
  return groups;
}

ProfilingDocument parse_text(std::string_view text, std::string source_path, GroupBy mode) {
  ProfilingDocument doc;
  doc.source_path = std::move(source_path);
  for (std::string_view line : split_lines(text)) {
    auto rec = parse_line(line, &doc.stats);
    if (rec) {
      doc.records.push_back(std::move(*rec));
      continue;
    }
    std::string_view t = trim(line);
    if (t.empty()) continue;
    if (!doc.records.empty()) {
      // Continuation of the previous record (hex dumps, wrapped messages).
      doc.records.back().content += ' ';
      doc.records.back().content += t;
      ++doc.stats.continuation_lines;
    } else {
      ++doc.stats.skipped_lines;
    }
  }
  if (doc.records.empty())
    throw EmptyDocumentError("no log records found in " +
                             (doc.source_path.empty() ? std::string("<text>") : doc.source_path));
  doc.groups = group_records(doc.records, mode);
  return doc;
}

ProfilingDocument parse_file(const std::string& path, GroupBy mode) {
  return parse_text(read_text_file(path), path, mode);
}

std::string format_record(const LogRecord& rec) {
  std::int64_t ms = rec.timestamp_ms % kMsPerDay;
  int hh = int(ms / 3'600'000);
  int mm = int(ms / 60'000 % 60);
  int ss = int(ms / 1000 % 60);
  int mmm = int(ms % 1000);
  char head[32];
  std::snprintf(head, sizeof head, "%02d:%02d:%02d.%03d", hh, mm, ss, mmm);

  std::string layer = rec.layer;
  while (layer.size() < 4) layer.push_back(' ');

  std::string out = std::string(head) + " [" + layer + "] " + std::string(level_name(rec.level));
  out.push_back(' ');
  if (rec.subframe && rec.channel) {
    char sf[16];
    std::snprintf(sf, sizeof sf, "[%05d] ", *rec.subframe);
    out += sf;
    out += *rec.channel;
    out += ": ";
  }
  out += rec.content;
  return out;
}

void write_groups_jsonl(const ProfilingDocument& doc, const std::string& path) {
  std::string out;
  for (const auto& g : doc.groups) {
    nlohmann::json j{{"timestamp_ms", g.timestamp_ms},
                     {"elapsed_s", g.elapsed_s},
                     {"text", g.text},
                     {"record_count", g.record_count}};
    out += j.dump();
    out.push_back('\n');
  }
  write_text_file(path, out);
}

std::vector<EventGroup> read_groups_jsonl(const std::string& path) {
  std::vector<EventGroup> groups;
  const std::string text = read_text_file(path);
  for (std::string_view line : split_lines(text)) {
    if (trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError("malformed group line in " + path);
    EventGroup g;
    g.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
    g.elapsed_s = j.at("elapsed_s").get<std::int64_t>();
    g.text = j.at("text").get<std::string>();
    g.record_count = j.value("record_count", std::size_t{0});
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace loglens::ingest
