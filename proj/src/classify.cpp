#include "loglens/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/rng.hpp"

namespace loglens::classify {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_class_balance(const std::vector<int>& y, std::size_t minimum) {
  std::size_t pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw ConfigError("labels must be 0 or 1");
    pos += std::size_t(v);
  }
  if (pos < minimum || y.size() - pos < minimum)
    throw ConfigError("training needs at least " + std::to_string(minimum) +
                      " examples of each class");
}

Matrix take_rows(const Matrix& x, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), x.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = x.row(idx[i]);
    std::copy(src.begin(), src.end(), out.data.begin() + std::ptrdiff_t(i * x.cols));
  }
  return out;
}

void fit_logreg(TrainedModel& model, const Matrix& x_raw, const std::vector<int>& y) {
  const auto& cfg = model.config;
  model.standardizer.fit(x_raw);
  Matrix x = model.standardizer.apply(x_raw);
  const std::size_t m = x.rows;
  const std::size_t f = x.cols;

  model.weights.assign(f, 0.0);
  model.bias = 0.0;

  std::vector<double> residual(m);
  std::vector<double> losses;
  losses.reserve(cfg.logreg_epochs);

  for (std::size_t epoch = 0; epoch < cfg.logreg_epochs; ++epoch) {
    double loss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      auto row = x.row(i);
      double z = model.bias;
      for (std::size_t j = 0; j < f; ++j) z += model.weights[j] * row[j];
      loss += softplus(z) - double(y[i]) * z;
      residual[i] = sigmoid(z) - double(y[i]);
    }
    loss /= double(m);
    double penalty = 0.0;
    for (double w : model.weights) penalty += w * w;
    loss += 0.5 * cfg.logreg_lambda * penalty;
    losses.push_back(loss);

    double grad_b = 0.0;
    std::vector<double> grad(f, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = x.row(i);
      for (std::size_t j = 0; j < f; ++j) grad[j] += residual[i] * row[j];
      grad_b += residual[i];
    }
    for (std::size_t j = 0; j < f; ++j) {
      grad[j] = grad[j] / double(m) + cfg.logreg_lambda * model.weights[j];
      model.weights[j] -= cfg.logreg_lr * grad[j];
    }
    model.bias -= cfg.logreg_lr * grad_b / double(m);
  }

  std::size_t violations = 0;
  for (std::size_t e = 1; e < losses.size(); ++e)
    if (losses[e] > losses[e - 1] + 1e-9) ++violations;
  if (losses.size() > 1 && double(violations) > 0.01 * double(losses.size() - 1))
    throw ConfigError("logistic loss increased on " + std::to_string(violations) +
                      " steps; lower the learning rate");

  for (double w : model.weights)
    if (!std::isfinite(w)) throw ConfigError("logistic weights diverged");
  if (!std::isfinite(model.bias)) throw ConfigError("logistic bias diverged");
}

void fit_knn(TrainedModel& model, const Matrix& x_raw, const std::vector<int>& y) {
  model.standardizer.fit(x_raw);
  model.train_x = model.standardizer.apply(x_raw);
  model.train_y = y;
  std::size_t k = std::min(model.config.knn_k, x_raw.rows);
  if (k % 2 == 0) --k;
  model.k = std::max<std::size_t>(1, k);
}

std::vector<double> knn_scores(const TrainedModel& model, const Matrix& x_raw) {
  const Matrix x = model.standardizer.apply(x_raw);
  const std::size_t n_train = model.train_x.rows;
  std::vector<double> scores(x.rows);
  std::vector<std::pair<double, std::size_t>> dist(n_train);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto probe = x.row(i);
    for (std::size_t t = 0; t < n_train; ++t) {
      auto row = model.train_x.row(t);
      double acc = 0.0;
      for (std::size_t j = 0; j < x.cols; ++j) {
        double d = probe[j] - row[j];
        acc += d * d;
      }
      dist[t] = {acc, t};
    }
    std::sort(dist.begin(), dist.end());
    std::size_t hits = 0;
    for (std::size_t t = 0; t < model.k; ++t) hits += std::size_t(model.train_y[dist[t].second]);
    scores[i] = double(hits) / double(model.k);
  }
  return scores;
}

std::vector<double> logreg_scores(const TrainedModel& model, const Matrix& x_raw) {
  Matrix x = model.standardizer.apply(x_raw);
  std::vector<double> scores(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    double z = model.bias;
    for (std::size_t j = 0; j < x.cols; ++j) z += model.weights[j] * row[j];
    scores[i] = sigmoid(z);
  }
  return scores;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows * m.cols) throw ConfigError("matrix payload has wrong size");
  m.data = std::move(data);
  return m;
}

const char* kModelSchema = "loglens-model-v1";
const char* kReportSchema = "loglens-report-v1";

}  // namespace

// Defined in forest.cpp.
void fit_forest(TrainedModel& model, const Matrix& x, const std::vector<int>& y);
std::vector<double> forest_scores(const TrainedModel& model, const Matrix& x);

std::string_view kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogReg: return "logreg";
    case ModelKind::KNN: return "knn";
    case ModelKind::RandomForest: return "forest";
  }
  return "logreg";
}

ModelKind kind_from_name(std::string_view name) {
  if (name == "logreg") return ModelKind::LogReg;
  if (name == "knn") return ModelKind::KNN;
  if (name == "forest") return ModelKind::RandomForest;
  throw ConfigError("unknown classifier kind: " + std::string(name));
}

void Standardizer::fit(const Matrix& x) {
  mean.assign(x.cols, 0.0);
  stddev.assign(x.cols, 1.0);
  if (x.rows == 0) return;
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= double(x.rows);
  std::vector<double> var(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) {
      double d = row[j] - mean[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < x.cols; ++j) {
    double s = std::sqrt(var[j] / double(x.rows));
    stddev[j] = s > 0.0 ? s : 1.0;
  }
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols != mean.size()) throw ConfigError("standardizer arity mismatch");
  Matrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) = (row[j] - mean[j]) / stddev[j];
  }
  return out;
}

Matrix design_matrix(const std::vector<feat::FeatureVector>& rows, bool use_masks) {
  const std::size_t f = use_masks ? 2 * feat::kNumBins : feat::kNumBins;
  Matrix x(rows.size(), f);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feat::kNumBins; ++j) x(i, j) = rows[i].distances[j];
    if (use_masks)
      for (std::size_t j = 0; j < feat::kNumBins; ++j)
        x(i, feat::kNumBins + j) = rows[i].present[j] ? 1.0 : 0.0;
  }
  return x;
}

std::vector<int> labels_of(const std::vector<feat::FeatureVector>& rows) {
  std::vector<int> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = rows[i].label;
  return y;
}

TrainedModel fit(ModelKind kind, const Matrix& x, const std::vector<int>& y,
                 const TrainConfig& config) {
  if (x.rows != y.size()) throw ConfigError("feature rows and labels differ in count");
  if (x.cols == 0) throw ConfigError("training needs at least one feature column");
  check_class_balance(y, 2);

  TrainedModel model;
  model.kind = kind;
  model.config = config;
  model.arity = x.cols;
  model.threshold = config.threshold;
  switch (kind) {
    case ModelKind::LogReg: fit_logreg(model, x, y); break;
    case ModelKind::KNN: fit_knn(model, x, y); break;
    case ModelKind::RandomForest: fit_forest(model, x, y); break;
  }
  return model;
}

std::vector<double> predict_scores(const TrainedModel& model, const Matrix& x) {
  if (x.cols != model.arity) throw ConfigError("prediction arity mismatch");
  switch (model.kind) {
    case ModelKind::LogReg: return logreg_scores(model, x);
    case ModelKind::KNN: return knn_scores(model, x);
    case ModelKind::RandomForest: return forest_scores(model, x);
  }
  throw ConfigError("unreachable model kind");
}

std::vector<int> predict_labels(const TrainedModel& model, const Matrix& x) {
  auto scores = predict_scores(model, x);
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    labels[i] = scores[i] >= model.threshold ? 1 : 0;
  return labels;
}

EvalReport roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ConfigError("scores and labels differ in count");
  std::size_t pos = 0;
  for (int v : labels) pos += std::size_t(v);
  std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw ConfigError("ROC needs both classes present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  EvalReport report;
  report.roc_points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1)
        ++tp;
      else
        ++fp;
      ++j;
    }
    report.roc_points.push_back({double(fp) / double(neg), double(tp) / double(pos)});
    i = j;
  }

  double auc = 0.0;
  for (std::size_t k = 1; k < report.roc_points.size(); ++k) {
    const auto& a = report.roc_points[k - 1];
    const auto& b = report.roc_points[k];
    auc += (b.fpr - a.fpr) * (b.tpr + a.tpr) * 0.5;
  }
  report.auc = auc;
  return report;
}

double accuracy_of(const std::vector<int>& predicted, const std::vector<int>& actual) {
  if (predicted.size() != actual.size() || predicted.empty())
    throw ConfigError("accuracy needs matched nonempty label lists");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == actual[i]) ++hits;
  return double(hits) / double(predicted.size());
}

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross validation needs at least 2 folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ConfigError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  if (folds > by_class[0].size() || folds > by_class[1].size())
    throw ConfigError("fold count exceeds the size of a class");

  std::vector<std::size_t> fold_of(labels.size());
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, std::string("folds:") + char('0' + c)));
    rng.shuffle(by_class[c]);
    for (std::size_t p = 0; p < by_class[c].size(); ++p) fold_of[by_class[c][p]] = p % folds;
  }
  return fold_of;
}

namespace {

// Shared by cross_validate and accuracy_over_windows: pooled out-of-fold
// scores under a fixed fold assignment.
std::vector<double> pooled_cv_scores(ModelKind kind, const Matrix& x,
                                     const std::vector<int>& y,
                                     const std::vector<std::size_t>& fold_of, std::size_t folds,
                                     const TrainConfig& config) {
  std::vector<double> scores(x.rows, 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < x.rows; ++i)
      (fold_of[i] == f ? test_idx : train_idx).push_back(i);
    if (test_idx.empty()) continue;

    Matrix train_x = take_rows(x, train_idx);
    std::vector<int> train_y(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) train_y[i] = y[train_idx[i]];

    TrainConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, "cv-fold:" + std::to_string(f));
    TrainedModel model = fit(kind, train_x, train_y, fold_config);

    Matrix test_x = take_rows(x, test_idx);
    auto fold_scores = predict_scores(model, test_x);
    for (std::size_t i = 0; i < test_idx.size(); ++i) scores[test_idx[i]] = fold_scores[i];
  }
  return scores;
}

EvalReport report_from_scores(const std::vector<double>& scores, const std::vector<int>& y,
                              double threshold) {
  EvalReport report = roc_auc(scores, y);
  std::vector<int> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= threshold ? 1 : 0;
  report.accuracy = accuracy_of(predicted, y);
  for (std::size_t i = 0; i < scores.size(); ++i)
    ++report.confusion[std::size_t(y[i])][std::size_t(predicted[i])];
  return report;
}

}  // namespace

EvalReport cross_validate(ModelKind kind, const std::vector<feat::FeatureVector>& rows,
                          const TrainConfig& config, std::size_t folds) {
  std::vector<int> y = labels_of(rows);
  auto fold_of = stratified_folds(y, folds, config.seed);
  Matrix x = design_matrix(rows, config.use_masks);
  auto scores = pooled_cv_scores(kind, x, y, fold_of, folds, config);
  return report_from_scores(scores, y, config.threshold);
}

EvalReport holdout_evaluate(ModelKind kind, const std::vector<feat::FeatureVector>& rows,
                            const TrainConfig& config, double test_fraction) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0)
    throw ConfigError("holdout fraction must lie strictly between 0 and 1");
  std::vector<int> y = labels_of(rows);
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw ConfigError("labels must be 0 or 1");
    by_class[y[i]].push_back(i);
  }

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2)
      throw ConfigError("holdout needs at least 2 examples of each class");
    Rng rng(derive_seed(config.seed, std::string("holdout:") + char('0' + c)));
    rng.shuffle(by_class[c]);
    std::size_t n_test = std::size_t(std::llround(double(by_class[c].size()) * test_fraction));
    n_test = std::max<std::size_t>(1, std::min(n_test, by_class[c].size() - 2));
    for (std::size_t p = 0; p < by_class[c].size(); ++p)
      (p < n_test ? test_idx : train_idx).push_back(by_class[c][p]);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  Matrix x = design_matrix(rows, config.use_masks);
  Matrix train_x = take_rows(x, train_idx);
  Matrix test_x = take_rows(x, test_idx);
  std::vector<int> train_y;
  std::vector<int> test_y;
  for (auto i : train_idx) train_y.push_back(y[i]);
  for (auto i : test_idx) test_y.push_back(y[i]);

  TrainedModel model = fit(kind, train_x, train_y, config);
  auto scores = predict_scores(model, test_x);
  return report_from_scores(scores, test_y, config.threshold);
}

std::map<int, double> accuracy_over_windows(ModelKind kind,
                                            const std::vector<feat::FeatureVector>& rows,
                                            const std::vector<int>& horizons,
                                            std::size_t folds, const TrainConfig& config) {
  std::vector<int> y = labels_of(rows);
  auto fold_of = stratified_folds(y, folds, config.seed);

  std::map<int, double> out;
  for (int h : horizons) {
    std::vector<feat::FeatureVector> cut;
    cut.reserve(rows.size());
    for (const auto& fv : rows) cut.push_back(feat::truncate_to_window(fv, h));
    Matrix x = design_matrix(cut, config.use_masks);
    auto scores = pooled_cv_scores(kind, x, y, fold_of, folds, config);
    std::vector<int> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      predicted[i] = scores[i] >= config.threshold ? 1 : 0;
    out[h] = accuracy_of(predicted, y);
  }
  return out;
}

void save_model(const TrainedModel& model, const std::string& path) {
  nlohmann::json j;
  j["schema"] = kModelSchema;
  j["kind"] = std::string(kind_name(model.kind));
  j["arity"] = model.arity;
  j["threshold"] = model.threshold;
  j["config"] = {{"use_masks", model.config.use_masks},
                 {"threshold", model.config.threshold},
                 {"seed", model.config.seed},
                 {"logreg_lambda", model.config.logreg_lambda},
                 {"logreg_lr", model.config.logreg_lr},
                 {"logreg_epochs", model.config.logreg_epochs},
                 {"knn_k", model.config.knn_k},
                 {"forest_trees", model.config.forest_trees}};
  j["standardizer"] = {{"mean", model.standardizer.mean}, {"stddev", model.standardizer.stddev}};
  switch (model.kind) {
    case ModelKind::LogReg:
      j["weights"] = model.weights;
      j["bias"] = model.bias;
      break;
    case ModelKind::KNN:
      j["train_x"] = matrix_to_json(model.train_x);
      j["train_y"] = model.train_y;
      j["k"] = model.k;
      break;
    case ModelKind::RandomForest: {
      nlohmann::json trees = nlohmann::json::array();
      for (const auto& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes)
          nodes.push_back({{"f", n.feature},
                           {"t", n.threshold},
                           {"l", n.left},
                           {"r", n.right},
                           {"p", n.leaf_fraction}});
        trees.push_back({{"nodes", nodes}});
      }
      j["trees"] = std::move(trees);
      break;
    }
  }
  write_text_file(path, j.dump(2) + "\n");
}

TrainedModel load_model(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("schema", "") != kModelSchema)
    throw ConfigError("not a model file: " + path);

  TrainedModel model;
  model.kind = kind_from_name(j.at("kind").get<std::string>());
  model.arity = j.at("arity").get<std::size_t>();
  model.threshold = j.at("threshold").get<double>();
  const auto& c = j.at("config");
  model.config.use_masks = c.at("use_masks").get<bool>();
  model.config.threshold = c.at("threshold").get<double>();
  model.config.seed = c.at("seed").get<std::uint64_t>();
  model.config.logreg_lambda = c.at("logreg_lambda").get<double>();
  model.config.logreg_lr = c.at("logreg_lr").get<double>();
  model.config.logreg_epochs = c.at("logreg_epochs").get<std::size_t>();
  model.config.knn_k = c.at("knn_k").get<std::size_t>();
  model.config.forest_trees = c.at("forest_trees").get<std::size_t>();
  model.standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  model.standardizer.stddev = j.at("standardizer").at("stddev").get<std::vector<double>>();

  switch (model.kind) {
    case ModelKind::LogReg:
      model.weights = j.at("weights").get<std::vector<double>>();
      model.bias = j.at("bias").get<double>();
      if (model.weights.size() != model.arity) throw ConfigError("weight arity mismatch");
      break;
    case ModelKind::KNN:
      model.train_x = matrix_from_json(j.at("train_x"));
      model.train_y = j.at("train_y").get<std::vector<int>>();
      model.k = j.at("k").get<std::size_t>();
      if (model.train_x.rows != model.train_y.size() || model.k > model.train_x.rows ||
          model.k % 2 == 0)
        throw ConfigError("stored neighbor model is inconsistent");
      break;
    case ModelKind::RandomForest:
      for (const auto& tj : j.at("trees")) {
        DecisionTree tree;
        for (const auto& nj : tj.at("nodes")) {
          TreeNode n;
          n.feature = nj.at("f").get<int>();
          n.threshold = nj.at("t").get<double>();
          n.left = nj.at("l").get<int>();
          n.right = nj.at("r").get<int>();
          n.leaf_fraction = nj.at("p").get<double>();
          if (n.feature >= int(model.arity)) throw ConfigError("tree feature out of range");
          tree.nodes.push_back(n);
        }
        if (tree.nodes.empty()) throw ConfigError("stored tree is empty");
        model.trees.push_back(std::move(tree));
      }
      break;
  }
  return model;
}

void save_report(const EvalReport& report, const std::string& path) {
  nlohmann::json roc = nlohmann::json::array();
  for (const auto& pt : report.roc_points) roc.push_back({pt.fpr, pt.tpr});
  nlohmann::json windows = nlohmann::json::object();
  for (const auto& [h, acc] : report.window_accuracy) windows[std::to_string(h)] = acc;
  nlohmann::json j{{"schema", kReportSchema},
                   {"accuracy", report.accuracy},
                   {"auc", report.auc},
                   {"roc", std::move(roc)},
                   {"confusion",
                    {{report.confusion[0][0], report.confusion[0][1]},
                     {report.confusion[1][0], report.confusion[1][1]}}},
                   {"window_accuracy", std::move(windows)}};
  write_text_file(path, j.dump(2) + "\n");
}

EvalReport load_report(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("schema", "") != kReportSchema)
    throw ConfigError("not a report file: " + path);
  EvalReport report;
  report.accuracy = j.at("accuracy").get<double>();
  report.auc = j.at("auc").get<double>();
  for (const auto& pt : j.at("roc"))
    report.roc_points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
  const auto& c = j.at("confusion");
  for (int a = 0; a < 2; ++a)
    for (int p = 0; p < 2; ++p)
      report.confusion[std::size_t(a)][std::size_t(p)] = c.at(a).at(p).get<std::size_t>();
  for (const auto& [key, value] : j.at("window_accuracy").items())
    report.window_accuracy[int(std::stol(key))] = value.get<double>();
  return report;
}

}  // namespace loglens::classify
