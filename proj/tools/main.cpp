#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "loglens/classify.hpp"
#include "loglens/errors.hpp"
#include "loglens/features.hpp"
#include "loglens/io_util.hpp"
#include "loglens/pipeline.hpp"
#include "loglens/synth.hpp"

namespace {

using loglens::classify::ModelKind;

std::vector<ModelKind> classifier_list(const std::string& name) {
  if (name == "all")
    return {ModelKind::LogReg, ModelKind::KNN, ModelKind::RandomForest};
  if (name == "random-forest") return {ModelKind::RandomForest};
  return {loglens::classify::kind_from_name(name)};
}

std::vector<int> full_horizon_curve() {
  const auto& labels = loglens::feat::bin_labels();
  return {labels.begin(), labels.end()};
}

struct CliState {
  loglens::pipeline::PipelineOptions pipeline;
  loglens::synth::CorpusSpec corpus;

  std::string embedder_name = "hashing";
  std::string classifier_name = "all";
  std::string group_by_name = "ms";
  bool compat_distance = false;
  bool no_masks = false;
  bool quiet = false;

  void finish() {
    pipeline.embedder.backend = embedder_name == "remote"
                                    ? loglens::embed::Backend::Remote
                                    : loglens::embed::Backend::Hashing;
    pipeline.group_by = group_by_name == "second" ? loglens::ingest::GroupBy::Second
                                                  : loglens::ingest::GroupBy::Millisecond;
    pipeline.classifiers = classifier_list(classifier_name);
    pipeline.use_masks = !no_masks;
    if (compat_distance)
      pipeline.distance_rule = loglens::feat::DistanceRule::CompatSqrtSum;
    if (!quiet)
      pipeline.progress = [](const std::string& line) { std::clog << line << "\n"; };
    corpus.seed = pipeline.seed;
  }
};

void add_shared_flags(CLI::App* cmd, CliState& state, bool needs_input) {
  auto* input = cmd->add_option("--input", state.pipeline.input,
                                "corpus directory, directory of .log files, or one file");
  if (needs_input) input->required();
  cmd->add_option("--out", state.pipeline.out_dir, "artifact directory")->required();
  cmd->add_option("--seed", state.pipeline.seed, "master seed for every stage");
  cmd->add_option("--keyword", state.pipeline.keyword, "success marker substring");
  cmd->add_option("--timeout-s", state.pipeline.timeout_s,
                  "seconds allowed for the marker to appear");
  cmd->add_option("--embedder", state.embedder_name, "sentence embedding backend")
      ->check(CLI::IsMember({"hashing", "remote"}));
  cmd->add_option("--endpoint", state.pipeline.embedder.remote_endpoint,
                  "http endpoint for the remote embedder");
  cmd->add_option("--batch-size", state.pipeline.embedder.batch_size,
                  "groups per remote request");
  cmd->add_option("--perplexity", state.pipeline.reduce.perplexity, "t-SNE perplexity");
  cmd->add_option("--iters", state.pipeline.reduce.iters, "t-SNE iterations");
  cmd->add_option("--eta", state.pipeline.reduce.eta, "t-SNE learning rate");
  cmd->add_option("--classifier", state.classifier_name, "classifier kind")
      ->check(CLI::IsMember({"logreg", "knn", "forest", "random-forest", "all"}));
  cmd->add_option("--folds", state.pipeline.folds, "cross-validation folds");
  cmd->add_option("--horizons", state.pipeline.horizons,
                  "comma-separated window horizons in seconds")
      ->delimiter(',');
  cmd->add_flag("--use-masks,!--no-masks", state.pipeline.use_masks,
                "append presence masks to the distance features");
  cmd->add_flag("--compat-distance", state.compat_distance,
                "sqrt(sum of centroid coordinates) distance rule, clamped at zero");
  cmd->add_flag("--holdout", state.pipeline.holdout,
                "single stratified 80/20 split instead of k-fold CV");
  cmd->add_option("--group-by", state.group_by_name, "event grouping granularity")
      ->check(CLI::IsMember({"ms", "second"}));
  cmd->add_option("--workers", state.pipeline.workers, "parallel workers (0 = auto)");
  cmd->add_flag("--quiet", state.quiet, "suppress per-file progress lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-layer log profiling pipeline"};
  app.set_config("--config", "", "key-value file mirroring the flags; flags win");
  app.require_subcommand(1);

  CliState state;
  int ran = 0;

  auto stage = [&](const std::string& name, const std::string& help, bool needs_input,
                   auto body) {
    auto* cmd = app.add_subcommand(name, help);
    add_shared_flags(cmd, state, needs_input);
    cmd->callback([&state, body, &ran] {
      state.finish();
      body();
      ++ran;
    });
    return cmd;
  };

  stage("parse", "normalize logs into event groups", true,
        [&] { loglens::pipeline::parse_stage(state.pipeline); });
  stage("label", "derive pass/fail labels from the marker keyword", true,
        [&] { loglens::pipeline::label_stage(state.pipeline); });
  stage("embed", "embed event groups into 512-d vectors", false,
        [&] { loglens::pipeline::embed_stage(state.pipeline); });
  stage("reduce", "project embeddings to 2-d with t-SNE", false,
        [&] { loglens::pipeline::reduce_stage(state.pipeline); });
  stage("featurize", "per-second centroid distances from projections", false,
        [&] { loglens::pipeline::featurize_stage(state.pipeline); });
  stage("train", "fit classifiers on the feature table", false, [&] {
    for (auto kind : state.pipeline.classifiers)
      loglens::pipeline::train_stage(state.pipeline, kind);
  });
  stage("evaluate", "cross-validate classifiers and write reports", false, [&] {
    for (auto kind : state.pipeline.classifiers) {
      auto report = loglens::pipeline::evaluate_stage(state.pipeline, kind);
      std::cout << loglens::classify::kind_name(kind) << " accuracy "
                << loglens::format_double(report.accuracy) << " auc "
                << loglens::format_double(report.auc) << "\n";
    }
  });
  stage("sweep", "accuracy as a function of the observation window", false, [&] {
    if (state.pipeline.horizons.empty()) state.pipeline.horizons = full_horizon_curve();
    for (auto kind : state.pipeline.classifiers) {
      auto sweep = loglens::pipeline::sweep_stage(state.pipeline, kind);
      std::cout << loglens::classify::kind_name(kind) << ":";
      for (const auto& [h, acc] : sweep)
        std::cout << " " << h << "s=" << loglens::format_double(acc);
      std::cout << "\n";
    }
  });
  stage("run-all", "parse through evaluate in one go", true,
        [&] { loglens::pipeline::run_all(state.pipeline); });

  {
    auto* cmd = app.add_subcommand("synth", "generate a labeled synthetic corpus");
    cmd->add_option("--out", state.pipeline.out_dir, "corpus directory")->required();
    cmd->add_option("--n-files", state.corpus.n_files, "number of log files");
    cmd->add_option("--pass-fraction", state.corpus.pass_fraction,
                    "fraction of files that complete the connection");
    cmd->add_option("--window-start", state.corpus.window_start_s,
                    "divergence window start (inclusive)");
    cmd->add_option("--window-end", state.corpus.window_end_s,
                    "divergence window end (exclusive)");
    cmd->add_option("--events-per-second", state.corpus.events_per_second,
                    "mean event rate");
    cmd->add_option("--duration-s", state.corpus.duration_s, "seconds of log per file");
    cmd->add_option("--seed", state.pipeline.seed, "corpus seed");
    cmd->add_flag("--no-keyword-line", [&](std::int64_t) {
      state.corpus.include_keyword_line = false;
    });
    cmd->callback([&] {
      state.finish();
      auto manifest = loglens::synth::generate_corpus(state.corpus, state.pipeline.out_dir);
      std::size_t passes = 0;
      for (const auto& row : manifest) passes += row.outcome.label == 1;
      std::cout << "wrote " << manifest.size() << " files (" << passes << " pass, "
                << manifest.size() - passes << " fail) under " << state.pipeline.out_dir
                << "\n";
      ++ran;
    });
  }

  {
    auto* cmd = app.add_subcommand("report", "summarize evaluation artifacts");
    cmd->add_option("--out", state.pipeline.out_dir, "artifact directory")->required();
    cmd->callback([&] {
      std::cout << loglens::pipeline::report(state.pipeline.out_dir);
      ++ran;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const loglens::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return ran > 0 ? 0 : 2;
}
