#include "adpi/ml/kfold.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "adpi/errors.hpp"

namespace adpi::ml {

std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("k-fold needs k >= 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  for (const auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw DataError("class " + std::to_string(label) + " has " +
                      std::to_string(members.size()) + " samples, fewer than k = " +
                      std::to_string(k));
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto index : members) {
      folds[next].push_back(index);
      next = (next + 1) % folds.size();
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<std::size_t> training_indices(const std::vector<Fold>& folds,
                                          std::size_t held_out) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == held_out) continue;
    out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace adpi::ml
