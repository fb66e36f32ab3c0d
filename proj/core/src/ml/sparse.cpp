#include "adpi/ml/sparse.hpp"

#include <cmath>

#include "adpi/errors.hpp"

namespace adpi::ml {

double FeatureVector::dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.value * dense[e.index];
  return sum;
}

std::vector<double> FeatureVector::to_dense() const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& e : entries) out[e.index] = e.value;
  return out;
}

void FeatureVector::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= dimension) {
      throw ContractError("sparse index out of range");
    }
    if (i > 0 && entries[i].index <= entries[i - 1].index) {
      throw ContractError("sparse indices must be strictly increasing");
    }
    if (!std::isfinite(entries[i].value)) {
      throw ContractError("sparse value is not finite");
    }
  }
}

FeatureVector from_dense(std::span<const double> dense) {
  FeatureVector out{dense.size(), {}};
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return out;
}

}  // namespace adpi::ml
