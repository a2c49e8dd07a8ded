#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loglens/features.hpp"
#include "loglens/matrix.hpp"

namespace loglens::classify {

enum class ModelKind { LogReg, KNN, RandomForest };

std::string_view kind_name(ModelKind kind);
ModelKind kind_from_name(std::string_view name);

struct TrainConfig {
  bool use_masks = true;  // append mask columns to the 38 distances
  double threshold = 0.5;
  std::uint64_t seed = 0;

  double logreg_lambda = 1e-4;
  double logreg_lr = 0.1;
  std::size_t logreg_epochs = 500;

  std::size_t knn_k = 5;

  std::size_t forest_trees = 100;
};

// Per-column z-scoring; constant columns keep stddev 1 so they map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  void fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_fraction = 0.0;  // class-1 fraction at the leaf
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct TrainedModel {
  ModelKind kind = ModelKind::LogReg;
  TrainConfig config;
  std::size_t arity = 0;
  double threshold = 0.5;

  Standardizer standardizer;  // LogReg and KNN

  std::vector<double> weights;  // LogReg
  double bias = 0.0;

  Matrix train_x;            // KNN, standardized
  std::vector<int> train_y;  // KNN
  std::size_t k = 5;         // KNN, odd and <= train size

  std::vector<DecisionTree> trees;  // RandomForest
};

// Stacks feature rows into the classifier input layout: 38 distances, then
// 38 masks as 0/1 when enabled.
Matrix design_matrix(const std::vector<feat::FeatureVector>& rows, bool use_masks);
std::vector<int> labels_of(const std::vector<feat::FeatureVector>& rows);

TrainedModel fit(ModelKind kind, const Matrix& x, const std::vector<int>& y,
                 const TrainConfig& config);

std::vector<double> predict_scores(const TrainedModel& model, const Matrix& x);
std::vector<int> predict_labels(const TrainedModel& model, const Matrix& x);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  double auc = 0.0;
  std::vector<RocPoint> roc_points;
  // confusion[actual][predicted]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::map<int, double> window_accuracy;
};

// Threshold sweep over distinct scores with tie grouping; trapezoidal AUC.
// Fills roc_points and auc; requires both classes.
EvalReport roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

double accuracy_of(const std::vector<int>& predicted, const std::vector<int>& actual);

// fold id per example: per-class shuffle, then round-robin.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t folds,
                                          std::uint64_t seed);

// Stratified k-fold cross validation with pooled out-of-fold scores.
EvalReport cross_validate(ModelKind kind, const std::vector<feat::FeatureVector>& rows,
                          const TrainConfig& config, std::size_t folds = 5);

// Single stratified holdout split evaluated once.
EvalReport holdout_evaluate(ModelKind kind, const std::vector<feat::FeatureVector>& rows,
                            const TrainConfig& config, double test_fraction = 0.2);

// CV accuracy per horizon with one fold assignment shared across horizons.
std::map<int, double> accuracy_over_windows(ModelKind kind,
                                            const std::vector<feat::FeatureVector>& rows,
                                            const std::vector<int>& horizons,
                                            std::size_t folds, const TrainConfig& config);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

void save_report(const EvalReport& report, const std::string& path);
EvalReport load_report(const std::string& path);

}  // namespace loglens::classify
