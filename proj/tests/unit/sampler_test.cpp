#include <gtest/gtest.h>

#include <random>

#include "adpi/errors.hpp"
#include "adpi/sampler.hpp"
#include "oracles.hpp"

namespace adpi {
namespace {

std::vector<Sample> hand_history() { return {{5, 1}, {7, 2}, {9, 4}}; }

TEST(PredictNext, HandTrace) {
  auto h = hand_history();
  EXPECT_DOUBLE_EQ(predict_next(h, 2.0), 3.0);
}

TEST(PredictNext, AllSlopeTermsSkipped) {
  std::vector<Sample> h = {{5, 2}, {5, 2}, {5, 2}};
  EXPECT_DOUBLE_EQ(predict_next(h, 0.0), 2.0);
}

TEST(PredictNext, ShortHistoryThrows) {
  std::vector<Sample> h = {{5, 1}, {7, 2}};
  EXPECT_THROW(predict_next(h, 2.0), InsufficientHistory);
}

TEST(PredictNext, SkippedTermsShrinkTheDivisor) {
  // Slopes: (5->7) = 0.5, (7->7) skipped, (7->11) = 0.75; mean 0.625.
  std::vector<Sample> h = {{5, 1}, {7, 2}, {7, 3}, {11, 6}, {12, 6}};
  EXPECT_DOUBLE_EQ(predict_next(h, 1.0), 6.0 + 1.0 * (0.5 + 0.75) / 2.0);
}

TEST(WindowDelta, GrowthBranchOnRepeatedWindow) {
  std::vector<Sample> h = {{7, 1}, {9, 2}, {9, 2}};
  EXPECT_DOUBLE_EQ(window_delta(h, 2.0, 5), 5.0);
}

TEST(WindowDelta, ExactPredictionKeepsWindow) {
  std::vector<Sample> h = {{5, 1}, {7, 2}, {9, 3}};
  EXPECT_DOUBLE_EQ(window_delta(h, 3.0, 5), 0.0);
}

TEST(WindowDelta, HandTraceRatioRule) {
  auto h = hand_history();
  EXPECT_DOUBLE_EQ(window_delta(h, 3.0, 5), 1.0);
}

TEST(WindowDelta, EqualCountWithMovedWindowBacksOff) {
  std::vector<Sample> h = {{5, 1}, {5, 2}, {9, 2}};
  EXPECT_DOUBLE_EQ(window_delta(h, 2.0, 5), -2.0);
}

TEST(WindowDelta, OverPredictionShrinks) {
  // previous 2, actual 4, predicted 6: R = 2, over-predicted so shrink by 2*dw.
  std::vector<Sample> h = {{5, 1}, {7, 2}, {8, 4}};
  EXPECT_DOUBLE_EQ(window_delta(h, 6.0, 5), -2.0);
}

TEST(NextWindow, Examples) {
  EXPECT_EQ(next_window(9, 1.0, 5, 15), 10);
  EXPECT_EQ(next_window(15, 5.0, 5, 15), 15);
  EXPECT_EQ(next_window(5, -3.5, 5, 15), 5);
  EXPECT_EQ(next_window(10, 0.5, 5, 15), 11);
  EXPECT_EQ(next_window(10, -0.5, 5, 15), 10);
}

TEST(RecordSample, AppendsAndCaps) {
  SamplerConfig cfg;
  AdaptiveSampler s(cfg);
  s.record_sample(10, 3);
  ASSERT_EQ(s.history().size(), 1u);
  EXPECT_EQ(s.history()[0], (Sample{10, 3}));
  for (int i = 0; i < 10; ++i) s.record_sample(5 + i, i % 5);
  ASSERT_EQ(s.history().size(), 10u);
  EXPECT_EQ(s.history().front(), (Sample{5, 0}));
  EXPECT_EQ(s.history().back(), (Sample{14, 4}));
}

TEST(RecordSample, CountAboveWindowRejected) {
  AdaptiveSampler s(SamplerConfig{});
  EXPECT_THROW(s.record_sample(5, 7), ContractError);
  EXPECT_THROW(s.record_sample(5, -1), ContractError);
  EXPECT_THROW(s.record_sample(16, 0), ContractError);
  EXPECT_TRUE(s.history().empty());
}

TEST(SamplerConfig, Validation) {
  SamplerConfig bad;
  bad.w_min = 10;
  EXPECT_THROW(AdaptiveSampler{bad}, ConfigError);
  bad = SamplerConfig{};
  bad.epoch_packets = 10;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SamplerConfig{};
  bad.history_len = 2;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Step, WarmUpReturnsInitialWindow) {
  AdaptiveSampler s(SamplerConfig{});
  EXPECT_EQ(s.step(1).next_window, 5);
  EXPECT_EQ(s.step(2).next_window, 5);
  EXPECT_EQ(s.current_window(), 5);
}

TEST(Step, HandTraceThirdStepReturnsTen) {
  AdaptiveSampler s(SamplerConfig{});
  EXPECT_EQ(s.step(5, 1).next_window, 5);
  EXPECT_EQ(s.step(7, 2).next_window, 5);
  auto t = s.step(9, 4);
  ASSERT_TRUE(t.predicted && t.window_delta);
  EXPECT_DOUBLE_EQ(*t.predicted, 3.0);
  EXPECT_DOUBLE_EQ(*t.window_delta, 1.0);
  EXPECT_EQ(t.next_window, 10);
  EXPECT_EQ(s.current_window(), 10);
}

TEST(Step, OpenLoopConstantZeroGrowsByFive) {
  AdaptiveSampler s(SamplerConfig{});
  std::vector<int> got;
  for (int i = 0; i < 3; ++i) got.push_back(s.step(5, 0).next_window);
  EXPECT_EQ(got, (std::vector<int>{5, 5, 10}));
  AdaptiveSampler t(SamplerConfig{});
  t.step(10, 0);
  t.step(10, 0);
  EXPECT_EQ(t.step(10, 0).next_window, 15);
  EXPECT_EQ(t.step(15, 0).next_window, 13);
  AdaptiveSampler u(SamplerConfig{});
  for (int i = 0; i < 2; ++i) u.step(15, 0);
  EXPECT_EQ(u.step(15, 0).next_window, 15);
}

TEST(Step, ClosedLoopConstantZeroTrace) {
  AdaptiveSampler s(SamplerConfig{});
  std::vector<int> windows;
  for (int i = 0; i < 15; ++i) windows.push_back(s.step(0).next_window);
  EXPECT_EQ(windows, (std::vector<int>{5, 5, 10, 8, 9, 9, 14, 12, 13, 13, 15, 14, 15, 15, 15}));
}

TEST(Step, MatchesStraightLineOracleOnRandomTraces) {
  std::mt19937_64 rng(3);
  for (int trace = 0; trace < 200; ++trace) {
    AdaptiveSampler s(SamplerConfig{});
    oracle::StraightLineSampler o;
    const int len = 1 + static_cast<int>(rng() % 50);
    for (int i = 0; i < len; ++i) {
      const int w = s.current_window();
      ASSERT_EQ(w, o.window);
      const int d = static_cast<int>(rng() % static_cast<unsigned>(w + 1));
      auto t = s.step(d);
      ASSERT_EQ(t.next_window, o.step(d));
      if (t.predicted) {
        ASSERT_EQ(*t.predicted, o.last_prediction);
        ASSERT_EQ(*t.window_delta, o.last_delta);
      }
    }
  }
}

TEST(Step, DeterministicForIdenticalInput) {
  auto run = [] {
    AdaptiveSampler s(SamplerConfig{});
    std::vector<int> out;
    for (int d : {0, 3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5}) {
      out.push_back(s.step(std::min(d, s.current_window())).next_window);
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace adpi
