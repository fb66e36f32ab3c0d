#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adpi::ml {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse row with strictly increasing indices below `dimension`.
struct FeatureVector {
  std::size_t dimension = 0;
  std::vector<SparseEntry> entries;

  double dot(std::span<const double> dense) const;
  std::vector<double> to_dense() const;
  /// Throws ContractError if indices are unsorted, duplicated or out of range,
  /// or a value is not finite.
  void validate() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector from_dense(std::span<const double> dense);

}  // namespace adpi::ml
