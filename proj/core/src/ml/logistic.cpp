#include "adpi/ml/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adpi/errors.hpp"

namespace adpi::ml {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_inputs(const LogisticModel& model, std::span<const FeatureVector> X,
                  std::span<const int> y) {
  if (X.size() != y.size()) {
    throw DataError("feature rows (" + std::to_string(X.size()) + ") and labels (" +
                    std::to_string(y.size()) + ") differ in length");
  }
  for (const auto& row : X) {
    if (row.dimension != model.dimension()) {
      throw DataError("feature dimension " + std::to_string(row.dimension) +
                      " does not match model dimension " +
                      std::to_string(model.dimension()));
    }
  }
  for (int label : y) {
    if (label != 0 && label != 1) throw DataError("labels must be 0 or 1");
  }
}

LossAndGradient evaluate(const LogisticModel& model, std::span<const FeatureVector> X,
                         std::span<const int> y) {
  const double n = static_cast<double>(X.size());
  LossAndGradient out;
  out.weight_grad.assign(model.dimension(), 0.0);
  double data_loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double z = model.decision(X[i]);
    // -[y ln h + (1-y) ln(1-h)] = softplus(z) - y z
    data_loss += softplus(z) - (y[i] == 1 ? z : 0.0);
    const double residual = sigmoid(z) - y[i];
    for (const auto& e : X[i].entries) out.weight_grad[e.index] += residual * e.value;
    out.bias_grad += residual;
  }
  double norm2 = 0.0;
  for (double w : model.weights) norm2 += w * w;
  out.loss = data_loss / n + model.lambda / (2.0 * n) * norm2;
  for (std::size_t j = 0; j < model.dimension(); ++j) {
    out.weight_grad[j] = out.weight_grad[j] / n + model.lambda / n * model.weights[j];
  }
  out.bias_grad /= n;
  return out;
}

double max_abs(const LossAndGradient& g) {
  double m = std::abs(g.bias_grad);
  for (double v : g.weight_grad) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticModel::decision(const FeatureVector& x) const {
  return x.dot(weights) + bias;
}

LossAndGradient lr_loss_grad(const LogisticModel& model, std::span<const FeatureVector> X,
                             std::span<const int> y) {
  check_inputs(model, X, y);
  if (X.empty()) throw DataError("loss needs at least one sample");
  return evaluate(model, X, y);
}

LogisticModel lr_train(std::span<const FeatureVector> X, std::span<const int> y,
                       const LogisticHyper& hyper, TrainingTrace* trace) {
  if (X.empty()) throw DataError("cannot train on an empty dataset");
  if (hyper.lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (!(hyper.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  LogisticModel model;
  model.weights.assign(X.front().dimension, 0.0);
  model.lambda = hyper.lambda;
  check_inputs(model, X, y);
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw DataError("training labels contain a single class");
  }

  TrainingTrace local;
  TrainingTrace& tr = trace ? *trace : local;
  tr = {};
  auto current = evaluate(model, X, y);
  tr.losses.push_back(current.loss);
  double step = hyper.learning_rate;
  constexpr int kMaxHalvings = 60;

  for (int iter = 0; iter < hyper.max_iters; ++iter) {
    if (max_abs(current) < hyper.tol) {
      tr.converged = true;
      break;
    }
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      LogisticModel candidate = model;
      for (std::size_t j = 0; j < candidate.weights.size(); ++j) {
        candidate.weights[j] -= step * current.weight_grad[j];
      }
      candidate.bias -= step * current.bias_grad;
      auto next = evaluate(candidate, X, y);
      if (next.loss <= current.loss) {
        model = std::move(candidate);
        current = std::move(next);
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    tr.iterations = iter + 1;
    if (!accepted) {
      // No decrease at any representable step size: a minimum to precision.
      tr.converged = true;
      break;
    }
    tr.losses.push_back(current.loss);
  }
  if (!tr.converged && max_abs(current) < hyper.tol) tr.converged = true;
  return model;
}

double lr_predict_proba(const LogisticModel& model, const FeatureVector& x) {
  if (x.dimension != model.dimension()) {
    throw DataError("feature dimension " + std::to_string(x.dimension) +
                    " does not match model dimension " +
                    std::to_string(model.dimension()));
  }
  return sigmoid(model.decision(x));
}

int lr_predict(const LogisticModel& model, const FeatureVector& x, double threshold) {
  return lr_predict_proba(model, x) >= threshold ? 1 : 0;
}

}  // namespace adpi::ml
