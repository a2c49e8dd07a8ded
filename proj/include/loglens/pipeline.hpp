#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "loglens/classify.hpp"
#include "loglens/embed.hpp"
#include "loglens/features.hpp"
#include "loglens/ground_truth.hpp"
#include "loglens/log_ingest.hpp"
#include "loglens/tsne.hpp"

namespace loglens::pipeline {

// One seed governs every stage; per-file and per-fold seeds are derived from
// it so artifacts only depend on their own inputs.
struct PipelineOptions {
  std::string input;  // corpus directory, directory of .log files, or one file
  std::string out_dir;
  std::uint64_t seed = 7;

  std::string keyword = truth::kDefaultKeyword;
  std::int64_t timeout_s = truth::kDefaultTimeoutS;
  ingest::GroupBy group_by = ingest::GroupBy::Millisecond;

  embed::EmbedderSpec embedder;
  tsne::TsneConfig reduce;  // seed field is re-derived per file
  feat::DistanceRule distance_rule = feat::DistanceRule::NormOfCentroid;

  classify::TrainConfig train;  // seed and use_masks mirrored from here
  bool use_masks = true;
  std::vector<classify::ModelKind> classifiers = {
      classify::ModelKind::LogReg, classify::ModelKind::KNN,
      classify::ModelKind::RandomForest};
  std::size_t folds = 5;
  bool holdout = false;  // single stratified split instead of k-fold CV
  double holdout_fraction = 0.2;
  std::vector<int> horizons;  // empty skips the window sweep

  unsigned workers = 0;
  std::function<void(const std::string&)> progress;  // one line per file/stage
};

// Stage artifacts under out_dir:
//   files.txt, groups/<stem>.jsonl, manifest.csv, embeddings/<stem>.csv,
//   projections/<stem>.csv, features.csv, model-<kind>.json,
//   report-<kind>.json, sweep-<kind>.csv, roc-<kind>.csv

std::vector<std::string> find_logs(const std::string& input);
std::string stem_of(const std::string& path);

void parse_stage(const PipelineOptions& options);
void label_stage(const PipelineOptions& options);
void embed_stage(const PipelineOptions& options);
void reduce_stage(const PipelineOptions& options);
void featurize_stage(const PipelineOptions& options);
void train_stage(const PipelineOptions& options, classify::ModelKind kind);
classify::EvalReport evaluate_stage(const PipelineOptions& options, classify::ModelKind kind);
std::map<int, double> sweep_stage(const PipelineOptions& options, classify::ModelKind kind);

void run_all(const PipelineOptions& options);

// Pure function of the artifacts in out_dir; also writes roc-<kind>.csv
// plot data next to them.
std::string report(const std::string& out_dir);

}  // namespace loglens::pipeline
