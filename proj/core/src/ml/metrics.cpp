#include "adpi/ml/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "adpi/errors.hpp"

namespace adpi::ml {

namespace {

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_scored(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) {
    throw DataError("labels and scores differ in length");
  }
  for (int label : y_true) {
    if (label != 0 && label != 1) throw DataError("labels must be 0 or 1");
  }
}

std::vector<std::size_t> by_descending_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Calls visit(threshold, tp, fp) once per distinct score, descending.
template <typename Visit>
void sweep(std::span<const int> y_true, std::span<const double> scores, Visit visit) {
  const auto order = by_descending_score(scores);
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (y_true[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    visit(threshold, tp, fp);
  }
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DataError("label sequences differ in length (" + std::to_string(y_true.size()) +
                    " vs " + std::to_string(y_pred.size()) + ")");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw DataError("labels must be 0 or 1");
    }
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (p == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
  Metrics m;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total(), m.accuracy_degenerate);
  m.precision = ratio(cm.tp, cm.tp + cm.fp, m.precision_degenerate);
  m.recall = ratio(cm.tp, cm.tp + cm.fn, m.recall_degenerate);
  m.fpr = ratio(cm.fp, cm.fp + cm.tn, m.fpr_degenerate);
  const double pr_sum = m.precision + m.recall;
  m.f1_degenerate = pr_sum == 0.0;
  m.f1 = m.f1_degenerate ? 0.0 : 2.0 * m.precision * m.recall / pr_sum;
  return m;
}

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  check_scored(y_true, scores);
  const auto positives = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  const auto negatives = y_true.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("ROC curve needs both classes");
  }
  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  sweep(y_true, scores, [&](double threshold, std::size_t tp, std::size_t fp) {
    curve.points.push_back({threshold, static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives});
  });
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    curve.auc += (b.x - a.x) * (a.y + b.y) / 2.0;
  }
  return curve;
}

std::vector<CurvePoint> pr_curve(std::span<const int> y_true,
                                 std::span<const double> scores) {
  check_scored(y_true, scores);
  const auto positives = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
  if (positives == 0) throw DataError("precision-recall curve needs positives");
  std::vector<CurvePoint> points{{std::numeric_limits<double>::infinity(), 0.0, 1.0}};
  sweep(y_true, scores, [&](double threshold, std::size_t tp, std::size_t fp) {
    points.push_back({threshold, static_cast<double>(tp) / positives,
                      static_cast<double>(tp) / static_cast<double>(tp + fp)});
  });
  return points;
}

EvalReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores,
                           double threshold) {
  check_scored(y_true, scores);
  std::vector<int> predicted(scores.size());
  std::transform(scores.begin(), scores.end(), predicted.begin(),
                 [threshold](double s) { return s >= threshold ? 1 : 0; });
  EvalReport report;
  report.threshold = threshold;
  report.confusion = confusion(y_true, predicted);
  report.metrics = metrics(report.confusion);
  const auto positives = std::count(y_true.begin(), y_true.end(), 1);
  if (positives > 0 && positives < static_cast<std::ptrdiff_t>(y_true.size())) {
    auto roc = roc_curve(y_true, scores);
    report.auc = roc.auc;
    report.roc_points = std::move(roc.points);
  }
  if (positives > 0) report.pr_points = pr_curve(y_true, scores);
  return report;
}

}  // namespace adpi::ml
