#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adpi/ml/sparse.hpp"

namespace adpi::ml {

/// 1 / (1 + e^-z), evaluated without overflow for any finite z.
double sigmoid(double z);

/// Binary logistic regression with an L2 penalty on the weights (not the bias).
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;

  std::size_t dimension() const { return weights.size(); }
  double decision(const FeatureVector& x) const;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_grad;
  double bias_grad = 0.0;
};

/// Mean cross-entropy plus (lambda / 2n) * |weights|^2, and its gradient.
/// Throws DataError on a dimension or length mismatch.
LossAndGradient lr_loss_grad(const LogisticModel& model,
                             std::span<const FeatureVector> X,
                             std::span<const int> y);

struct LogisticHyper {
  double lambda = 1.0;
  double learning_rate = 0.5;
  int max_iters = 5000;
  double tol = 1e-6;
  std::uint64_t seed = 42;
};

struct TrainingTrace {
  int iterations = 0;
  bool converged = false;
  /// Loss after every accepted step, starting with the initial loss.
  std::vector<double> losses;
};

/// Full-batch gradient descent from zero weights. A step that raises the
/// loss is retried with half the step size. Stops when the largest gradient
/// component drops below `tol` or after `max_iters` steps. Throws DataError
/// unless both classes are present.
LogisticModel lr_train(std::span<const FeatureVector> X, std::span<const int> y,
                       const LogisticHyper& hyper, TrainingTrace* trace = nullptr);

double lr_predict_proba(const LogisticModel& model, const FeatureVector& x);
/// Class 1 when the probability reaches the threshold; a tie counts as malicious.
int lr_predict(const LogisticModel& model, const FeatureVector& x,
               double threshold = 0.5);

}  // namespace adpi::ml
