#pragma once

#include <optional>
#include <span>
#include <vector>

namespace adpi {

/// Parameters of the adaptive packet window.
///
/// Each flow is cut into epochs of `epoch_packets` (m) packets; the first
/// `w` packets of each epoch are inspected, and w is re-estimated at every
/// epoch boundary from the last `history_len` (N) samples.
struct SamplerConfig {
  int epoch_packets = 100;
  int w_min = 5;
  int w_max = 15;
  int history_len = 10;
  int w_init = 5;
  /// Window growth applied when two equally sized windows saw the same
  /// malicious count.
  int equal_delta_growth = 5;

  /// Throws ConfigError unless 1 <= w_min <= w_init <= w_max <= m, N >= 3
  /// and equal_delta_growth >= 1.
  void validate() const;
};

/// One completed sampling window: its size and how many of its packets the
/// payload classifier flagged.
struct Sample {
  int window = 0;
  int malicious = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Linear-prediction estimate of the malicious count of the newest sample.
///
/// `history` holds n + 1 samples (oldest first, n >= 2). The estimate
/// extrapolates from the n-th sample using the mean slope d(malicious)/d(window)
/// over the first n samples. Pairs with equal window sizes have no slope and
/// are left out of the mean; with no usable pair the estimate is the n-th
/// sample's count. Throws InsufficientHistory when n < 2.
double predict_next(std::span<const Sample> history, double delta_w);

/// Change to apply to the newest window, given the prediction for it.
/// `history` must hold at least two samples; the newest is the actual count.
double window_delta(std::span<const Sample> history, double predicted,
                    int equal_delta_growth);

/// round-half-away-from-zero(current + delta), clamped to [w_min, w_max].
int next_window(int current, double delta, int w_min, int w_max);

/// What a single step of the controller observed and decided.
struct StepTrace {
  int window = 0;
  int malicious = 0;
  std::optional<double> predicted;
  std::optional<double> window_delta;
  int next_window = 0;
};

/// Per-flow adaptive window controller. Not thread-safe; each flow owns one.
class AdaptiveSampler {
 public:
  explicit AdaptiveSampler(SamplerConfig config);

  const SamplerConfig& config() const { return config_; }
  std::span<const Sample> history() const { return history_; }
  int current_window() const { return current_window_; }

  /// Appends a sample, evicting the oldest beyond history_len. Throws
  /// ContractError if malicious is outside [0, window] or window is outside
  /// [w_min, w_max].
  void record_sample(int window, int malicious);

  /// Closes the current window with `malicious` flagged packets and returns
  /// the size of the next one.
  StepTrace step(int malicious);
  /// Same, but for a window whose size was chosen externally.
  StepTrace step(int window, int malicious);

 private:
  SamplerConfig config_;
  std::vector<Sample> history_;
  int current_window_;
};

}  // namespace adpi
