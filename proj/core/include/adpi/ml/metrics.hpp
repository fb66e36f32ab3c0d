#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace adpi::ml {

/// Positive class = malicious (1).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws DataError if the sequences differ in length or hold labels other
/// than 0 and 1.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

/// Ratios whose denominator is zero are reported as 0 with their flag set.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;  // true positive rate
  double fpr = 0.0;
  double f1 = 0.0;

  bool accuracy_degenerate = false;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool fpr_degenerate = false;
  bool f1_degenerate = false;
};

Metrics metrics(const ConfusionMatrix& cm);

/// `threshold` is the score cut that produced (x, y); the leading sentinel
/// point uses +infinity.
struct CurvePoint {
  double threshold = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RocCurve {
  std::vector<CurvePoint> points;  // (fpr, tpr)
  double auc = 0.0;
};

/// Sweeps every distinct score from high to low, treating equal scores as a
/// single step. AUC by the trapezoidal rule. Throws DataError unless both
/// classes are present.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

/// (recall, precision) per distinct score, starting from (0, 1). Throws
/// DataError when there are no positives.
std::vector<CurvePoint> pr_curve(std::span<const int> y_true,
                                 std::span<const double> scores);

struct EvalReport {
  ConfusionMatrix confusion;
  Metrics metrics;
  double threshold = 0.5;
  std::optional<double> auc;  // absent for single-class data
  std::vector<CurvePoint> roc_points;
  std::vector<CurvePoint> pr_points;
};

/// Everything above for one set of scores, labelling score >= threshold as 1.
EvalReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores,
                           double threshold = 0.5);

}  // namespace adpi::ml
