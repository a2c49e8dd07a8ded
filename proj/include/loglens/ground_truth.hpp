#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loglens/log_ingest.hpp"

namespace loglens::truth {

inline constexpr const char* kDefaultKeyword = "rrcConnectionSetupComplete";
inline constexpr std::int64_t kDefaultTimeoutS = 600;

struct OutcomeLabel {
  int label = 0;  // 1 = success, 0 = fail
  std::optional<std::int64_t> matched_at_ms;
  std::optional<std::int64_t> duration_s;
};

struct LabeledFile {
  std::string source_path;
  OutcomeLabel outcome;
};

// label=1 iff any record's raw content contains keyword (substring,
// case-sensitive) within timeout_s of the file's first record.
OutcomeLabel label_outcome(const ingest::ProfilingDocument& doc, const std::string& keyword,
                           std::int64_t timeout_s = kDefaultTimeoutS);

struct DurationHistogram {
  std::int64_t bin_width_s = 1;
  std::vector<std::size_t> counts;  // counts[i] covers [i*w, (i+1)*w)
};

// Counts duration_s over successful labels only. All-fail input yields an
// empty histogram.
DurationHistogram duration_histogram(const std::vector<OutcomeLabel>& labels,
                                     std::int64_t bin_width_s);

// Manifest CSV with header source_path,label,duration_s. Failed files carry
// an empty duration field.
std::string manifest_to_csv(const std::vector<LabeledFile>& files);
std::vector<LabeledFile> manifest_from_csv(const std::string& text);
void write_manifest(const std::vector<LabeledFile>& files, const std::string& path);
std::vector<LabeledFile> read_manifest(const std::string& path);

}  // namespace loglens::truth
