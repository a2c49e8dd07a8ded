#include "loglens/ground_truth.hpp"

#include <string_view>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"

namespace loglens::truth {

OutcomeLabel label_outcome(const ingest::ProfilingDocument& doc, const std::string& keyword,
                           std::int64_t timeout_s) {
  if (keyword.empty()) throw ConfigError("label keyword must be nonempty");
  if (timeout_s <= 0) throw ConfigError("label timeout must be positive");

  OutcomeLabel out;
  if (doc.records.empty()) return out;
  const std::int64_t first = doc.records.front().timestamp_ms;
  for (const auto& rec : doc.records) {
    if (rec.content.find(keyword) == std::string::npos) continue;
    std::int64_t adjusted = rec.timestamp_ms;
    if (adjusted < first) adjusted += ingest::kMsPerDay;
    std::int64_t elapsed_s = (adjusted - first) / 1000;
    if (elapsed_s > timeout_s) continue;
    out.label = 1;
    out.matched_at_ms = rec.timestamp_ms;
    out.duration_s = elapsed_s;
    break;
  }
  return out;
}

DurationHistogram duration_histogram(const std::vector<OutcomeLabel>& labels,
                                     std::int64_t bin_width_s) {
  if (bin_width_s <= 0) throw ConfigError("histogram bin width must be positive");
  DurationHistogram hist;
  hist.bin_width_s = bin_width_s;
  for (const auto& l : labels) {
    if (l.label != 1 || !l.duration_s) continue;
    std::size_t bin = std::size_t(*l.duration_s / bin_width_s);
    if (hist.counts.size() <= bin) hist.counts.resize(bin + 1, 0);
    ++hist.counts[bin];
  }
  return hist;
}

std::string manifest_to_csv(const std::vector<LabeledFile>& files) {
  std::string out = "source_path,label,duration_s\n";
  for (const auto& f : files) {
    out += csv_escape(f.source_path);
    out += ',';
    out += std::to_string(f.outcome.label);
    out += ',';
    if (f.outcome.duration_s) out += std::to_string(*f.outcome.duration_s);
    out += '\n';
  }
  return out;
}

std::vector<LabeledFile> manifest_from_csv(const std::string& text) {
  std::vector<LabeledFile> files;
  bool header_seen = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || fields[0] != "source_path" || fields[1] != "label" ||
          fields[2] != "duration_s")
        throw ConfigError("manifest header must be source_path,label,duration_s");
      continue;
    }
    if (fields.size() != 3) throw ConfigError("manifest row must have 3 fields");
    LabeledFile f;
    f.source_path = fields[0];
    auto label = parse_int(fields[1]);
    if (!label || (*label != 0 && *label != 1))
      throw ConfigError("manifest label must be 0 or 1");
    f.outcome.label = int(*label);
    if (!fields[2].empty()) {
      auto dur = parse_int(fields[2]);
      if (!dur || *dur < 0) throw ConfigError("manifest duration_s must be a whole number");
      f.outcome.duration_s = *dur;
    }
    if (f.outcome.label == 1 && !f.outcome.duration_s)
      throw ConfigError("successful manifest row missing duration_s");
    files.push_back(std::move(f));
  }
  if (!header_seen) throw ConfigError("manifest is empty");
  return files;
}

void write_manifest(const std::vector<LabeledFile>& files, const std::string& path) {
  write_text_file(path, manifest_to_csv(files));
}

std::vector<LabeledFile> read_manifest(const std::string& path) {
  return manifest_from_csv(read_text_file(path));
}

}  // namespace loglens::truth
