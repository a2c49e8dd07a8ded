#include <algorithm>
#include <cmath>
#include <vector>

#include "loglens/classify.hpp"
#include "loglens/errors.hpp"
#include "loglens/rng.hpp"

namespace loglens::classify {
namespace {

double gini(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  double p = double(pos) / double(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct TreeBuilder {
  const Matrix& x;
  const std::vector<int>& y;
  std::size_t mtry;
  Rng& rng;
  DecisionTree tree;
  std::vector<std::size_t> feature_pool;

  TreeBuilder(const Matrix& x_, const std::vector<int>& y_, std::size_t mtry_, Rng& rng_)
      : x(x_), y(y_), mtry(mtry_), rng(rng_) {
    feature_pool.resize(x.cols);
    for (std::size_t j = 0; j < x.cols; ++j) feature_pool[j] = j;
  }

  int make_leaf(std::size_t pos, std::size_t total) {
    TreeNode node;
    node.leaf_fraction = double(pos) / double(total);
    tree.nodes.push_back(node);
    return int(tree.nodes.size() - 1);
  }

  // Candidate thresholds are midpoints between adjacent distinct sorted
  // values; the winning split must strictly reduce Gini impurity.
  int build(std::vector<std::size_t>& samples) {
    const std::size_t total = samples.size();
    std::size_t pos = 0;
    for (auto i : samples) pos += std::size_t(y[i]);
    if (total < 2 || pos == 0 || pos == total) return make_leaf(pos, total);

    const double parent = gini(pos, total);
    double best_gain = 0.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;

    for (std::size_t m = 0; m < mtry; ++m) {
      std::size_t swap_at = m + rng.below(feature_pool.size() - m);
      std::swap(feature_pool[m], feature_pool[swap_at]);
      const std::size_t f = feature_pool[m];

      std::vector<std::pair<double, int>> column(total);
      for (std::size_t i = 0; i < total; ++i) column[i] = {x(samples[i], f), y[samples[i]]};
      std::sort(column.begin(), column.end());

      std::size_t left_pos = 0;
      for (std::size_t i = 1; i < total; ++i) {
        left_pos += std::size_t(column[i - 1].second);
        if (column[i].first == column[i - 1].first) continue;
        double threshold = 0.5 * (column[i - 1].first + column[i].first);
        if (!(threshold > column[i - 1].first)) continue;
        double child = double(i) / double(total) * gini(left_pos, i) +
                       double(total - i) / double(total) * gini(pos - left_pos, total - i);
        double gain = parent - child;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = threshold;
        }
      }
    }

    if (best_gain <= 0.0) return make_leaf(pos, total);

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : samples) (x(i, best_feature) < best_threshold ? left : right).push_back(i);

    TreeNode node;
    node.feature = int(best_feature);
    node.threshold = best_threshold;
    tree.nodes.push_back(node);
    const int self = int(tree.nodes.size() - 1);
    samples.clear();
    samples.shrink_to_fit();
    tree.nodes[self].left = build(left);
    tree.nodes[self].right = build(right);
    return self;
  }
};

double tree_score(const DecisionTree& tree, std::span<const double> row) {
  int at = 0;
  while (tree.nodes[std::size_t(at)].feature >= 0) {
    const TreeNode& node = tree.nodes[std::size_t(at)];
    at = row[std::size_t(node.feature)] < node.threshold ? node.left : node.right;
  }
  return tree.nodes[std::size_t(at)].leaf_fraction;
}

}  // namespace

void fit_forest(TrainedModel& model, const Matrix& x, const std::vector<int>& y) {
  const std::size_t n = x.rows;
  const std::size_t mtry =
      std::max<std::size_t>(1, std::size_t(std::floor(std::sqrt(double(x.cols)))));
  model.trees.clear();
  model.trees.reserve(model.config.forest_trees);
  for (std::size_t t = 0; t < model.config.forest_trees; ++t) {
    Rng rng(derive_seed(model.config.seed, "tree:" + std::to_string(t)));
    std::vector<std::size_t> bag(n);
    for (auto& i : bag) i = rng.below(n);
    TreeBuilder builder(x, y, mtry, rng);
    builder.build(bag);
    model.trees.push_back(std::move(builder.tree));
  }
}

std::vector<double> forest_scores(const TrainedModel& model, const Matrix& x) {
  if (model.trees.empty()) throw ConfigError("forest model has no trees");
  std::vector<double> scores(x.rows, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    double acc = 0.0;
    for (const auto& tree : model.trees) acc += tree_score(tree, row);
    scores[i] = acc / double(model.trees.size());
  }
  return scores;
}

}  // namespace loglens::classify
