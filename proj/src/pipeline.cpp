#include "loglens/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/parallel.hpp"
#include "loglens/rng.hpp"

namespace fs = std::filesystem;

namespace loglens::pipeline {
namespace {

void note(const PipelineOptions& options, const std::string& stage, const std::string& file,
          const std::string& detail) {
  if (options.progress) options.progress(stage + "\t" + file + "\t" + detail);
}

std::string require_artifact(const std::string& out_dir, const std::string& name,
                             const std::string& producer) {
  std::string path = out_dir + "/" + name;
  if (!fs::exists(path))
    throw MissingArtifactError(name + " not found under " + out_dir + "; run " + producer +
                               " first");
  return path;
}

std::vector<std::string> read_file_list(const PipelineOptions& options) {
  const std::string text =
      read_text_file(require_artifact(options.out_dir, "files.txt", "parse"));
  std::vector<std::string> files;
  for (auto line : split_lines(text))
    if (!line.empty()) files.emplace_back(line);
  if (files.empty()) throw MissingArtifactError("files.txt is empty; rerun parse");
  return files;
}

classify::TrainConfig train_config(const PipelineOptions& options) {
  classify::TrainConfig config = options.train;
  config.seed = options.seed;
  config.use_masks = options.use_masks;
  return config;
}

std::string model_tag(classify::ModelKind kind) {
  return std::string(classify::kind_name(kind));
}

}  // namespace

std::vector<std::string> find_logs(const std::string& input) {
  std::vector<std::string> files;
  if (fs::is_directory(input)) {
    fs::path root = fs::path(input) / "logs";
    if (!fs::is_directory(root)) root = input;
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_regular_file() && entry.path().extension() == ".log")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(input)) {
    files.push_back(input);
  }
  if (files.empty()) throw ConfigError("no .log files found under " + input);

  std::set<std::string> stems;
  for (const auto& f : files)
    if (!stems.insert(stem_of(f)).second)
      throw ConfigError("duplicate log file stem: " + stem_of(f));
  return files;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void parse_stage(const PipelineOptions& options) {
  const auto files = find_logs(options.input);
  ensure_dir(options.out_dir);
  ensure_dir(options.out_dir + "/groups");

  std::string listing;
  for (const auto& f : files) listing += f + "\n";
  write_text_file(options.out_dir + "/files.txt", listing);

  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    auto doc = ingest::parse_file(files[i], options.group_by);
    ingest::write_groups_jsonl(doc,
                               options.out_dir + "/groups/" + stem_of(files[i]) + ".jsonl");
    note(options, "parse", files[i], "groups=" + std::to_string(doc.groups.size()));
  });
}

void label_stage(const PipelineOptions& options) {
  const auto files = read_file_list(options);
  std::vector<truth::LabeledFile> manifest(files.size());
  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    auto doc = ingest::parse_file(files[i], options.group_by);
    manifest[i].source_path = files[i];
    manifest[i].outcome = truth::label_outcome(doc, options.keyword, options.timeout_s);
    note(options, "label", files[i], "label=" + std::to_string(manifest[i].outcome.label));
  });
  truth::write_manifest(manifest, options.out_dir + "/manifest.csv");
}

void embed_stage(const PipelineOptions& options) {
  const auto files = read_file_list(options);
  require_artifact(options.out_dir, "groups", "parse");
  ensure_dir(options.out_dir + "/embeddings");

  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    const std::string stem = stem_of(files[i]);
    auto groups = ingest::read_groups_jsonl(
        require_artifact(options.out_dir, "groups/" + stem + ".jsonl", "parse"));
    std::vector<std::string> texts;
    texts.reserve(groups.size());
    for (const auto& g : groups) texts.push_back(g.text);
    auto vectors = embed::embed_texts(options.embedder, texts);
    for (std::size_t g = 0; g < vectors.size(); ++g) {
      vectors[g].ref.source_path = files[i];
      vectors[g].ref.timestamp_ms = groups[g].timestamp_ms;
      vectors[g].ref.elapsed_s = groups[g].elapsed_s;
    }
    embed::write_embeddings_csv(vectors, options.out_dir + "/embeddings/" + stem + ".csv");
    note(options, "embed", files[i], "vectors=" + std::to_string(vectors.size()));
  });
}

void reduce_stage(const PipelineOptions& options) {
  const auto files = read_file_list(options);
  require_artifact(options.out_dir, "embeddings", "embed");
  ensure_dir(options.out_dir + "/projections");

  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    const std::string stem = stem_of(files[i]);
    auto vectors = embed::read_embeddings_csv(
        require_artifact(options.out_dir, "embeddings/" + stem + ".csv", "embed"));
    tsne::TsneConfig config = options.reduce;
    config.seed = derive_seed(options.seed, "reduce:" + stem);
    auto projection = tsne::fit(embed::to_matrix(vectors), config);

    std::vector<tsne::ProjectedPoint> points(vectors.size());
    for (std::size_t g = 0; g < vectors.size(); ++g) {
      points[g].ref = vectors[g].ref;
      points[g].y1 = projection.y(g, 0);
      points[g].y2 = projection.y(g, 1);
    }
    tsne::write_projection_csv(points, options.out_dir + "/projections/" + stem + ".csv");
    note(options, "reduce", files[i],
         "kl=" + format_double(projection.kl_trace.empty() ? 0.0
                                                           : projection.kl_trace.back()));
  });
}

void featurize_stage(const PipelineOptions& options) {
  auto manifest =
      truth::read_manifest(require_artifact(options.out_dir, "manifest.csv", "label"));
  require_artifact(options.out_dir, "projections", "reduce");

  std::vector<feat::FeatureVector> rows(manifest.size());
  parallel_for(manifest.size(), options.workers, [&](std::size_t i) {
    const std::string stem = stem_of(manifest[i].source_path);
    auto points = tsne::read_projection_csv(
        require_artifact(options.out_dir, "projections/" + stem + ".csv", "reduce"));
    rows[i] = feat::featurize(points, manifest[i].outcome, options.distance_rule);
    rows[i].source_path = manifest[i].source_path;
    note(options, "featurize", manifest[i].source_path, "ok");
  });
  feat::write_features_csv(rows, options.out_dir + "/features.csv");
}

void train_stage(const PipelineOptions& options, classify::ModelKind kind) {
  auto rows = feat::read_features_csv(
      require_artifact(options.out_dir, "features.csv", "featurize"));
  auto config = train_config(options);
  auto x = classify::design_matrix(rows, config.use_masks);
  auto model = classify::fit(kind, x, classify::labels_of(rows), config);
  classify::save_model(model, options.out_dir + "/model-" + model_tag(kind) + ".json");
  note(options, "train", model_tag(kind), "rows=" + std::to_string(rows.size()));
}

classify::EvalReport evaluate_stage(const PipelineOptions& options, classify::ModelKind kind) {
  auto rows = feat::read_features_csv(
      require_artifact(options.out_dir, "features.csv", "featurize"));
  auto config = train_config(options);
  auto report = options.holdout
                    ? classify::holdout_evaluate(kind, rows, config, options.holdout_fraction)
                    : classify::cross_validate(kind, rows, config, options.folds);
  classify::save_report(report, options.out_dir + "/report-" + model_tag(kind) + ".json");
  note(options, "evaluate", model_tag(kind),
       "accuracy=" + format_double(report.accuracy) + " auc=" + format_double(report.auc));
  return report;
}

std::map<int, double> sweep_stage(const PipelineOptions& options, classify::ModelKind kind) {
  auto rows = feat::read_features_csv(
      require_artifact(options.out_dir, "features.csv", "featurize"));
  auto sweep = classify::accuracy_over_windows(kind, rows, options.horizons, options.folds,
                                               train_config(options));
  std::string csv = "horizon_s,accuracy\n";
  for (const auto& [h, acc] : sweep)
    csv += std::to_string(h) + "," + format_double(acc) + "\n";
  write_text_file(options.out_dir + "/sweep-" + model_tag(kind) + ".csv", csv);
  note(options, "sweep", model_tag(kind),
       "horizons=" + std::to_string(options.horizons.size()));
  return sweep;
}

void run_all(const PipelineOptions& options) {
  parse_stage(options);
  label_stage(options);
  embed_stage(options);
  reduce_stage(options);
  featurize_stage(options);
  for (auto kind : options.classifiers) {
    train_stage(options, kind);
    evaluate_stage(options, kind);
    if (!options.horizons.empty()) sweep_stage(options, kind);
  }
}

std::string report(const std::string& out_dir) {
  static const classify::ModelKind kKinds[] = {classify::ModelKind::LogReg,
                                               classify::ModelKind::KNN,
                                               classify::ModelKind::RandomForest};
  std::ostringstream out;
  out << "evaluation summary\n";

  bool any = false;
  for (auto kind : kKinds) {
    const std::string tag = model_tag(kind);
    const std::string path = out_dir + "/report-" + tag + ".json";
    if (!fs::exists(path)) continue;
    any = true;
    auto report = classify::load_report(path);
    out << "  " << tag << ": accuracy " << format_double(report.accuracy) << ", auc "
        << format_double(report.auc) << ", confusion [[" << report.confusion[0][0] << ","
        << report.confusion[0][1] << "],[" << report.confusion[1][0] << ","
        << report.confusion[1][1] << "]]\n";

    std::string roc = "fpr,tpr\n";
    for (const auto& pt : report.roc_points)
      roc += format_double(pt.fpr) + "," + format_double(pt.tpr) + "\n";
    write_text_file(out_dir + "/roc-" + tag + ".csv", roc);
  }
  if (!any)
    throw MissingArtifactError("no report-<kind>.json under " + out_dir +
                               "; run evaluate first");

  const std::string manifest_path = out_dir + "/manifest.csv";
  if (fs::exists(manifest_path)) {
    auto manifest = truth::read_manifest(manifest_path);
    std::vector<truth::OutcomeLabel> outcomes;
    std::size_t passes = 0;
    for (const auto& row : manifest) {
      outcomes.push_back(row.outcome);
      passes += row.outcome.label == 1;
    }
    out << "files: " << manifest.size() << " (" << passes << " pass, "
        << manifest.size() - passes << " fail)\n";
    auto hist = truth::duration_histogram(outcomes, 5);
    out << "connection durations (5 s bins):";
    if (hist.counts.empty()) out << " none";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
      out << " [" << b * 5 << "," << (b + 1) * 5 << ")=" << hist.counts[b];
    out << "\n";
  }

  for (auto kind : kKinds) {
    const std::string path = out_dir + "/sweep-" + model_tag(kind) + ".csv";
    if (!fs::exists(path)) continue;
    out << "window sweep (" << model_tag(kind) << "):";
    const std::string text = read_text_file(path);
    auto lines = split_lines(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto fields = parse_csv_line(lines[i]);
      if (fields.size() == 2) out << " " << fields[0] << "s=" << fields[1];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace loglens::pipeline
