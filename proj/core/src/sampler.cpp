#include "adpi/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adpi/errors.hpp"

namespace adpi {

void SamplerConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw ConfigError("invalid sampler config: " + what);
  };
  if (w_min < 1) fail("w_min must be >= 1");
  if (w_init < w_min) fail("w_init must be >= w_min");
  if (w_max < w_init) fail("w_max must be >= w_init");
  if (epoch_packets < w_max) fail("m must be >= w_max");
  if (history_len < 3) fail("history length must be >= 3");
  if (equal_delta_growth < 1) fail("equal_delta_growth must be >= 1");
}

double predict_next(std::span<const Sample> history, double delta_w) {
  if (history.size() < 3) {
    throw InsufficientHistory("prediction needs at least 3 samples, have " +
                              std::to_string(history.size()));
  }
  const std::size_t n = history.size() - 1;
  double slope_sum = 0.0;
  int terms = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int dw = history[i + 1].window - history[i].window;
    if (dw == 0) continue;
    slope_sum += static_cast<double>(history[i + 1].malicious - history[i].malicious) /
                 static_cast<double>(dw);
    ++terms;
  }
  const double base = history[n - 1].malicious;
  if (terms == 0) return base;
  return base + delta_w / terms * slope_sum;
}

double window_delta(std::span<const Sample> history, double predicted,
                    int equal_delta_growth) {
  if (history.size() < 2) {
    throw InsufficientHistory("window adjustment needs at least 2 samples");
  }
  const Sample& newest = history[history.size() - 1];
  const Sample& previous = history[history.size() - 2];
  const double delta_w = newest.window - previous.window;
  const double actual = newest.malicious;

  if (newest.malicious == previous.malicious) {
    // The ratio is undefined: grow on a repeated window, otherwise back off.
    return delta_w == 0.0 ? static_cast<double>(equal_delta_growth) : -delta_w / 2.0;
  }
  if (predicted == actual) return 0.0;
  // The window did not move but the count did; the ratio rule would keep it
  // pinned forever.
  if (delta_w == 0.0) return equal_delta_growth;

  const double ratio = (predicted - previous.malicious) / (actual - previous.malicious);
  const double sign = predicted - actual > 0.0 ? 1.0 : -1.0;
  return -sign * std::abs(ratio * delta_w);
}

int next_window(int current, double delta, int w_min, int w_max) {
  const double rounded = std::round(current + delta);
  return static_cast<int>(std::clamp(rounded, static_cast<double>(w_min),
                                     static_cast<double>(w_max)));
}

AdaptiveSampler::AdaptiveSampler(SamplerConfig config)
    : config_(config), current_window_(config.w_init) {
  config_.validate();
  history_.reserve(static_cast<std::size_t>(config_.history_len) + 1);
}

void AdaptiveSampler::record_sample(int window, int malicious) {
  if (malicious < 0 || malicious > window) {
    throw ContractError("malicious count " + std::to_string(malicious) +
                        " outside [0, " + std::to_string(window) + "]");
  }
  if (window < config_.w_min || window > config_.w_max) {
    throw ContractError("window " + std::to_string(window) + " outside [" +
                        std::to_string(config_.w_min) + ", " +
                        std::to_string(config_.w_max) + "]");
  }
  history_.push_back({window, malicious});
  if (history_.size() > static_cast<std::size_t>(config_.history_len)) {
    history_.erase(history_.begin());
  }
}

StepTrace AdaptiveSampler::step(int malicious) {
  return step(current_window_, malicious);
}

StepTrace AdaptiveSampler::step(int window, int malicious) {
  record_sample(window, malicious);
  StepTrace trace{window, malicious, std::nullopt, std::nullopt, config_.w_init};
  if (history_.size() >= 3) {
    const auto& prev = history_[history_.size() - 2];
    const double delta_w = window - prev.window;
    const double predicted = predict_next(history_, delta_w);
    const double delta = window_delta(history_, predicted, config_.equal_delta_growth);
    trace.predicted = predicted;
    trace.window_delta = delta;
    trace.next_window = next_window(window, delta, config_.w_min, config_.w_max);
  }
  current_window_ = trace.next_window;
  return trace;
}

}  // namespace adpi
