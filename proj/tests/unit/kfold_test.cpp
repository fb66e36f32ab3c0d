#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "adpi/errors.hpp"
#include "adpi/ml/kfold.hpp"

namespace adpi::ml {
namespace {

int positives(const Fold& fold, const std::vector<int>& y) {
  int n = 0;
  for (auto i : fold) n += y[i];
  return n;
}

TEST(KFold, ExactDivisibility) {
  const std::vector<int> y = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
  const auto folds = stratified_kfold(y, 2, 42);
  ASSERT_EQ(folds.size(), 2u);
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 5u);
    EXPECT_EQ(positives(f, y), 1);
  }
}

TEST(KFold, ClassSmallerThanKRejected) {
  const std::vector<int> y = {0, 0, 0, 0, 1};
  EXPECT_THROW(stratified_kfold(y, 2, 1), DataError);
  EXPECT_THROW(stratified_kfold(std::vector<int>{0, 1}, 1, 1), DataError);
}

TEST(KFold, DeterministicPerSeed) {
  std::vector<int> y(50);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 3 == 0;
  EXPECT_EQ(stratified_kfold(y, 5, 7), stratified_kfold(y, 5, 7));
  EXPECT_NE(stratified_kfold(y, 5, 7), stratified_kfold(y, 5, 8));
}

TEST(KFold, PartitionAndProportionsOnRandomData) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 6);
    const std::size_t n = static_cast<std::size_t>(2 * k) + rng() % 300;
    std::vector<int> y(n);
    const double rate = 0.05 + 0.9 * static_cast<double>(rng() % 100) / 100.0;
    std::bernoulli_distribution B(rate);
    for (auto& v : y) v = B(rng);
    const auto pos = std::count(y.begin(), y.end(), 1);
    if (pos < k || static_cast<long>(n) - pos < k) continue;

    const auto folds = stratified_kfold(y, k, rng());
    std::vector<int> hits(n, 0);
    for (const auto& f : folds) {
      ASSERT_TRUE(std::is_sorted(f.begin(), f.end()));
      for (auto i : f) ++hits[i];
      const double exact_pos = static_cast<double>(pos) / k;
      const double exact_neg = static_cast<double>(static_cast<long>(n) - pos) / k;
      const int p = positives(f, y);
      ASSERT_LE(std::abs(p - exact_pos), 1.0);
      ASSERT_LE(std::abs(static_cast<double>(f.size()) - p - exact_neg), 1.0);
    }
    ASSERT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    const auto train = training_indices(folds, 0);
    ASSERT_EQ(train.size() + folds[0].size(), n);
  }
}

}  // namespace
}  // namespace adpi::ml
