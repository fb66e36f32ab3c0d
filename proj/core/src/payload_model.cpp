#include "adpi/payload_model.hpp"

#include <string>

#include "adpi/errors.hpp"

namespace adpi {

PayloadModel::PayloadModel(PayloadFeaturizer featurizer, ml::LogisticModel logistic)
    : featurizer_(std::move(featurizer)), logistic_(std::move(logistic)) {
  if (featurizer_.dimension() != logistic_.dimension()) {
    throw ConfigError("featurizer dimension " + std::to_string(featurizer_.dimension()) +
                      " does not match classifier dimension " +
                      std::to_string(logistic_.dimension()));
  }
}

double PayloadModel::score(std::string_view payload) const {
  return ml::lr_predict_proba(logistic_, featurizer_.featurize(payload));
}

}  // namespace adpi
