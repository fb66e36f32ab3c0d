#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adpi::ml {

using Fold = std::vector<std::size_t>;

/// Splits sample indices into k disjoint folds that preserve class
/// proportions: every fold holds floor or ceil(n_c / k) members of each class
/// c. Each class is shuffled with `seed` and dealt round-robin, continuing
/// where the previous class stopped so fold sizes stay balanced. Indices
/// within a fold are sorted. Throws DataError if k < 2 or a class has fewer
/// than k members.
std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

/// Every index not in folds[held_out].
std::vector<std::size_t> training_indices(const std::vector<Fold>& folds,
                                          std::size_t held_out);

}  // namespace adpi::ml
