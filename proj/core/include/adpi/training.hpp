#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adpi/encrypted_features.hpp"
#include "adpi/flow.hpp"
#include "adpi/ml/decision_tree.hpp"
#include "adpi/ml/logistic.hpp"
#include "adpi/ml/metrics.hpp"
#include "adpi/payload_model.hpp"

namespace adpi {

/// Out-of-fold evaluation. `pooled` scores every sample with the model that
/// did not see it.
struct CrossValidationResult {
  int k = 0;
  std::uint64_t seed = 0;
  ml::EvalReport pooled;
  std::vector<ml::EvalReport> folds;
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;
};

/// Fits the featurizer and the classifier on the whole corpus.
PayloadModel train_payload_model(std::span<const LabeledPayload> corpus,
                                 const ml::LogisticHyper& hyper);

/// Stratified k-fold; each fold fits its own featurizer on its training part.
CrossValidationResult cross_validate_payload(std::span<const LabeledPayload> corpus,
                                             int k, std::uint64_t seed,
                                             const ml::LogisticHyper& hyper,
                                             double threshold = 0.5);

ml::EvalReport evaluate_payload_model(const PayloadModel& model,
                                      std::span<const LabeledPayload> samples,
                                      double threshold = 0.5);

struct LearningCurvePoint {
  double fraction = 0.0;
  std::size_t train_size = 0;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
};

/// For each fraction f, every fold trains on a class-stratified f-share of
/// its training part (shuffled with the seed, at least one sample per class)
/// and is scored on that subset and on its held-out fold. Accuracies are
/// averaged over the folds.
std::vector<LearningCurvePoint> payload_learning_curve(
    std::span<const LabeledPayload> corpus, int k, std::uint64_t seed,
    const ml::LogisticHyper& hyper, std::span<const double> fractions);

/// Records without a label are rejected with DataError.
ml::DecisionTreeModel train_encrypted_model(std::span<const EncryptedFlowRecord> records,
                                            const ml::TreeHyper& hyper);

CrossValidationResult cross_validate_encrypted(std::span<const EncryptedFlowRecord> records,
                                               int k, std::uint64_t seed,
                                               const ml::TreeHyper& hyper);

ml::EvalReport evaluate_encrypted_model(const ml::DecisionTreeModel& model,
                                        std::span<const EncryptedFlowRecord> records);

}  // namespace adpi
