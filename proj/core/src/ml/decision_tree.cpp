#include "adpi/ml/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "adpi/errors.hpp"

namespace adpi::ml {

namespace {

double impurity(SplitCriterion criterion, double positives, double total) {
  if (total <= 0.0) return 0.0;
  const double p = positives / total;
  const double q = 1.0 - p;
  if (criterion == SplitCriterion::gini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

constexpr double kGainTolerance = 1e-12;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double weighted_impurity = 0.0;
};

class Builder {
 public:
  Builder(std::span<const std::vector<double>> X, std::span<const int> y,
          const TreeHyper& hyper, DecisionTreeModel& model)
      : X_(X), y_(y), hyper_(hyper), model_(model) {}

  int build(std::vector<std::size_t> rows, int depth) {
    const auto positives = static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [&](std::size_t r) { return y_[r] == 1; }));
    const double n = static_cast<double>(rows.size());

    const int id = static_cast<int>(model_.nodes.size());
    TreeNode node;
    node.samples = rows.size();
    node.probability = static_cast<double>(positives) / n;
    node.label = 2 * positives >= rows.size() ? 1 : 0;
    model_.nodes.push_back(node);

    const bool pure = positives == 0 || positives == rows.size();
    const bool depth_capped = hyper_.max_depth && depth >= *hyper_.max_depth;
    const bool too_small = rows.size() < static_cast<std::size_t>(
                                             std::max(2, hyper_.min_samples_split));
    if (pure || depth_capped || too_small) return id;

    const double parent = impurity(hyper_.criterion, static_cast<double>(positives), n);
    auto split = best_split(rows, positives);
    if (split.feature < 0 ||
        parent - split.weighted_impurity < hyper_.min_gain - kGainTolerance) {
      return id;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows) {
      (X_[r][split.feature] <= split.threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = build(std::move(left_rows), depth + 1);
    const int right = build(std::move(right_rows), depth + 1);
    auto& self = model_.nodes[id];
    self.feature = split.feature;
    self.threshold = split.threshold;
    self.left = left;
    self.right = right;
    return id;
  }

 private:
  Split best_split(const std::vector<std::size_t>& rows, std::size_t positives) const {
    constexpr double kTieTolerance = 1e-12;
    const double n = static_cast<double>(rows.size());
    Split best;
    best.weighted_impurity = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < model_.n_features; ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return X_[a][f] < X_[b][f];
      });
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        if (y_[order[i]] == 1) ++left_pos;
        const double lo = X_[order[i]][f];
        const double hi = X_[order[i + 1]][f];
        if (!(lo < hi)) continue;
        const double n_left = static_cast<double>(i + 1);
        const double n_right = n - n_left;
        const double weighted =
            (n_left * impurity(hyper_.criterion, static_cast<double>(left_pos), n_left) +
             n_right * impurity(hyper_.criterion,
                                static_cast<double>(positives - left_pos), n_right)) /
            n;
        if (weighted < best.weighted_impurity - kTieTolerance) {
          double threshold = lo + (hi - lo) / 2.0;
          if (threshold >= hi) threshold = lo;  // adjacent doubles
          best = {static_cast<int>(f), threshold, weighted};
        }
      }
    }
    return best;
  }

  std::span<const std::vector<double>> X_;
  std::span<const int> y_;
  const TreeHyper& hyper_;
  DecisionTreeModel& model_;
};

}  // namespace

int DecisionTreeModel::depth() const {
  if (nodes.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& node = nodes[id];
    if (!node.is_leaf()) {
      stack.push_back({node.left, d + 1});
      stack.push_back({node.right, d + 1});
    }
  }
  return deepest;
}

void DecisionTreeModel::validate() const {
  if (nodes.empty()) throw ConfigError("decision tree has no nodes");
  std::vector<int> parents(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (!(node.probability >= 0.0 && node.probability <= 1.0)) {
      throw ConfigError("leaf probability outside [0, 1] at node " + std::to_string(i));
    }
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= n_features) {
      throw ConfigError("tree feature index " + std::to_string(node.feature) +
                        " out of range for " + std::to_string(n_features) + " features");
    }
    for (int child : {node.left, node.right}) {
      // Children are always stored after their parent.
      if (child <= static_cast<int>(i) || child >= static_cast<int>(nodes.size())) {
        throw ConfigError("invalid child index at node " + std::to_string(i));
      }
      if (++parents[child] > 1) {
        throw ConfigError("node " + std::to_string(child) + " has two parents");
      }
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (parents[i] != 1) throw ConfigError("unreachable tree node " + std::to_string(i));
  }
}

DecisionTreeModel dt_train(std::span<const std::vector<double>> X, std::span<const int> y,
                           const TreeHyper& hyper) {
  if (X.empty()) throw DataError("cannot train a tree on an empty dataset");
  if (X.size() != y.size()) throw DataError("feature rows and labels differ in length");
  DecisionTreeModel model;
  model.n_features = X.front().size();
  model.hyper = hyper;
  for (const auto& row : X) {
    if (row.size() != model.n_features) throw DataError("ragged feature rows");
  }
  for (int label : y) {
    if (label != 0 && label != 1) throw DataError("labels must be 0 or 1");
  }
  std::vector<std::size_t> rows(X.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Builder(X, y, hyper, model).build(std::move(rows), 0);
  return model;
}

TreePrediction dt_predict(const DecisionTreeModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw DataError("feature dimension " + std::to_string(x.size()) +
                    " does not match tree dimension " + std::to_string(model.n_features));
  }
  if (model.nodes.empty()) throw ConfigError("decision tree has no nodes");
  int id = 0;
  int depth = 0;
  while (!model.nodes[id].is_leaf()) {
    const auto& node = model.nodes[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
    ++depth;
  }
  const auto& leaf = model.nodes[id];
  return {leaf.label, leaf.probability, depth};
}

}  // namespace adpi::ml
