#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace adpi::ml {

enum class SplitCriterion { gini, entropy };

struct TreeHyper {
  /// nullopt grows until every leaf is pure or cannot be split.
  std::optional<int> max_depth = 12;
  int min_samples_split = 2;
  double min_gain = 1e-7;
  SplitCriterion criterion = SplitCriterion::gini;
};

/// Internal nodes have feature >= 0 and route x[feature] <= threshold left.
/// Leaves have feature == -1 and carry the fraction of malicious training
/// samples that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
  double probability = 0.0;
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t n_features = 0;
  TreeHyper hyper;

  int depth() const;
  /// Throws ConfigError on dangling children, cycles, out-of-range feature
  /// indices or leaf probabilities outside [0, 1].
  void validate() const;
};

struct TreePrediction {
  int label = 0;
  /// Probability of the malicious class at the reached leaf.
  double probability = 0.0;
  int depth = 0;
};

/// Greedy CART. Thresholds are midpoints between consecutive distinct values;
/// ties go to the lowest feature index, then the lowest threshold. A leaf's
/// label is the majority class, with a tie resolved as malicious.
/// Throws DataError on empty input, ragged rows or a length mismatch.
DecisionTreeModel dt_train(std::span<const std::vector<double>> X,
                           std::span<const int> y, const TreeHyper& hyper = {});

TreePrediction dt_predict(const DecisionTreeModel& model, std::span<const double> x);

}  // namespace adpi::ml
