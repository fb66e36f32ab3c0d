#pragma once

#include <string_view>

#include "adpi/ml/logistic.hpp"
#include "adpi/text_features.hpp"

namespace adpi {

/// A fitted featurizer paired with the logistic model trained on its output.
class PayloadModel {
 public:
  /// Throws ConfigError when the featurizer dimension and the number of
  /// logistic weights disagree.
  PayloadModel(PayloadFeaturizer featurizer, ml::LogisticModel logistic);

  /// Probability that `payload` is malicious.
  double score(std::string_view payload) const;

  const PayloadFeaturizer& featurizer() const { return featurizer_; }
  const ml::LogisticModel& logistic() const { return logistic_; }
  std::size_t dimension() const { return featurizer_.dimension(); }

 private:
  PayloadFeaturizer featurizer_;
  ml::LogisticModel logistic_;
};

}  // namespace adpi
