#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglens/ground_truth.hpp"

namespace loglens::synth {

// Token pools per layer. Both classes share the layer pools and the boot
// pool; inside the divergence window, fail files draw from the disjoint
// pool instead. The divergent templates deliberately share a stem so the
// planted content is mutually similar as well as disjoint from the rest.
struct VocabProfile {
  std::vector<std::string> boot;
  std::vector<std::string> rlc;
  std::vector<std::string> mac;
  std::vector<std::string> phy;
  std::vector<std::string> rrc;
  std::vector<std::string> divergent;

  static const VocabProfile& defaults();
};

// Every file opens with an attach burst over seconds [0,4) drawn from the
// shared boot pool, then settles into steady per-layer traffic.
struct CorpusSpec {
  std::size_t n_files = 200;
  double pass_fraction = 0.5;
  int window_start_s = 10;  // divergence window [start, end); equal = no window
  int window_end_s = 17;
  double events_per_second = 5.0;
  int duration_s = 42;
  std::uint64_t seed = 7;
  // The negative control: pass files keep their label and duration but the
  // completion line itself is left out of the written log.
  bool include_keyword_line = true;
  VocabProfile vocab = VocabProfile::defaults();
};

void validate(const CorpusSpec& spec);

// Exact split: round(n_files * pass_fraction) files carry label 1, assigned
// through a seeded permutation.
std::vector<int> assign_labels(const CorpusSpec& spec);

struct GeneratedFile {
  std::string relative_path;
  truth::LabeledFile manifest_row;
  std::string text;
  std::size_t record_lines = 0;
  std::size_t hex_lines = 0;
};

GeneratedFile generate_file(const CorpusSpec& spec, std::size_t index, int label);

// Writes logs/*.log, labels.csv and spec.echo under out_dir.
std::vector<truth::LabeledFile> generate_corpus(const CorpusSpec& spec,
                                                const std::string& out_dir);

void write_spec_echo(const CorpusSpec& spec, const std::string& path);
CorpusSpec read_spec_echo(const std::string& path);

}  // namespace loglens::synth
