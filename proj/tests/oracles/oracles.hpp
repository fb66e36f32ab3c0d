#pragma once

// Reference computations used only by tests. Nothing here calls into the
// library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace adpi::oracle {

// Straight-line transcription of the window controller: predict the newest
// sample's malicious count from the mean slope of the older ones, derive the
// window change from the ratio rule (or the equal-count rule), round and clamp.
struct StraightLineSampler {
  int w_min = 5;
  int w_max = 15;
  int history = 10;
  int w_init = 5;
  int growth = 5;

  std::vector<int> W;
  std::vector<int> D;
  int window = 5;

  double last_prediction = 0.0;
  double last_delta = 0.0;

  int step_with(int w, int d) {
    W.push_back(w);
    D.push_back(d);
    if (static_cast<int>(W.size()) > history) {
      W.erase(W.begin());
      D.erase(D.begin());
    }
    const int len = static_cast<int>(W.size());
    if (len < 3) {
      window = w_init;
      return window;
    }
    // 1-based: w_1..w_{n+1} live at W[0]..W[n].
    const int n = len - 1;
    const double dw = W[n] - W[n - 1];
    double slope_total = 0.0;
    int used = 0;
    for (int i = 1; i <= n - 1; ++i) {
      const int step_w = W[i] - W[i - 1];
      if (step_w == 0) continue;
      slope_total += static_cast<double>(D[i] - D[i - 1]) / step_w;
      ++used;
    }
    double pred = D[n - 1];
    if (used > 0) pred = D[n - 1] + dw / used * slope_total;

    double change;
    if (D[n] == D[n - 1]) {
      change = W[n] == W[n - 1] ? growth : -0.5 * dw;
    } else if (pred == D[n]) {
      change = 0.0;
    } else if (dw == 0.0) {
      change = growth;
    } else {
      const double r = (pred - D[n - 1]) / (D[n] - D[n - 1]);
      const double sgn = (pred - D[n]) / std::fabs(pred - D[n]);
      change = -sgn * std::fabs(r * dw);
    }
    last_prediction = pred;
    last_delta = change;
    long next = std::lround(W[n] + change);
    if (next < w_min) next = w_min;
    if (next > w_max) next = w_max;
    window = static_cast<int>(next);
    return window;
  }

  int step(int d) { return step_with(window, d); }
};

// Is `addr` inside network/len, by comparing the top `len` bits one at a time.
inline bool bitwise_prefix_match(std::uint32_t addr, std::uint32_t network, int len) {
  for (int bit = 31; bit > 31 - len; --bit) {
    if (((addr >> bit) & 1u) != ((network >> bit) & 1u)) return false;
  }
  return true;
}

// ASCII-only tri-gram split by byte offsets.
inline std::vector<std::string> ascii_trigrams(const std::string& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) out.push_back(s.substr(i, 3));
  return out;
}

// Dense TF-IDF matrix over a sorted vocabulary, computed from scratch.
struct DenseTfIdf {
  std::vector<std::string> vocabulary;
  std::vector<double> idf;

  explicit DenseTfIdf(const std::vector<std::string>& corpus) {
    std::set<std::string> all;
    for (const auto& doc : corpus) {
      for (const auto& g : ascii_trigrams(doc)) all.insert(g);
    }
    vocabulary.assign(all.begin(), all.end());
    for (const auto& term : vocabulary) {
      int df = 0;
      for (const auto& doc : corpus) {
        const auto grams = ascii_trigrams(doc);
        if (std::find(grams.begin(), grams.end(), term) != grams.end()) ++df;
      }
      idf.push_back(std::log((1.0 + corpus.size()) / (1.0 + df)) + 1.0);
    }
  }

  std::vector<double> row(const std::string& doc) const {
    std::vector<double> out(vocabulary.size(), 0.0);
    const auto grams = ascii_trigrams(doc);
    if (grams.empty()) return out;
    for (std::size_t j = 0; j < vocabulary.size(); ++j) {
      const auto count = std::count(grams.begin(), grams.end(), vocabulary[j]);
      out[j] = (static_cast<double>(count) / static_cast<double>(grams.size())) * idf[j];
    }
    return out;
  }
};

// P(score of a random positive > score of a random negative), ties = 1/2.
inline double pairwise_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct Recount {
  double accuracy, precision, recall, fpr, f1;
};

// Naive metric recount straight from the label vectors.
inline Recount recount(const std::vector<int>& t, const std::vector<int>& p) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 1 && p[i] == 1) tp++;
    if (t[i] == 0 && p[i] == 1) fp++;
    if (t[i] == 0 && p[i] == 0) tn++;
    if (t[i] == 1 && p[i] == 0) fn++;
  }
  Recount r{};
  r.accuracy = t.empty() ? 0 : (tp + tn) / t.size();
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0;
  r.fpr = fp + tn > 0 ? fp / (fp + tn) : 0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0;
  return r;
}

// Best single threshold on one feature by trying every midpoint and
// counting misclassifications; returns the first best midpoint.
inline double best_stump_threshold(const std::vector<double>& x, const std::vector<int>& y) {
  std::vector<double> v(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  double best_t = 0.0;
  int best_err = static_cast<int>(x.size()) + 1;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double t = (v[i] + v[i + 1]) / 2.0;
    int err_a = 0, err_b = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const int pred_a = x[k] <= t ? 0 : 1;
      err_a += pred_a != y[k];
      err_b += (1 - pred_a) != y[k];
    }
    const int err = std::min(err_a, err_b);
    if (err < best_err) {
      best_err = err;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace adpi::oracle
