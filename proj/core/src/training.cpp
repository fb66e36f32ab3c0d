#include "adpi/training.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "adpi/errors.hpp"
#include "adpi/ml/kfold.hpp"

namespace adpi {

namespace {

std::vector<int> labels_of(std::span<const LabeledPayload> corpus) {
  std::vector<int> y;
  y.reserve(corpus.size());
  for (const auto& s : corpus) y.push_back(static_cast<int>(s.label));
  return y;
}

std::vector<int> labels_of(std::span<const EncryptedFlowRecord> records) {
  std::vector<int> y;
  y.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].label) {
      throw DataError("flow record " + std::to_string(i + 1) + " has no label");
    }
    y.push_back(static_cast<int>(*records[i].label));
  }
  return y;
}

template <typename T>
std::vector<T> pick(std::span<const T> items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(items[i]);
  return out;
}

std::vector<std::vector<double>> encode_all(std::span<const EncryptedFlowRecord> records) {
  std::vector<std::vector<double>> X;
  X.reserve(records.size());
  for (const auto& r : records) {
    auto row = encode(r);
    X.emplace_back(row.begin(), row.end());
  }
  return X;
}

void summarize(CrossValidationResult& cv) {
  double sum = 0.0;
  for (const auto& f : cv.folds) sum += f.metrics.accuracy;
  cv.mean_accuracy = sum / static_cast<double>(cv.folds.size());
  double sq = 0.0;
  for (const auto& f : cv.folds) {
    sq += (f.metrics.accuracy - cv.mean_accuracy) * (f.metrics.accuracy - cv.mean_accuracy);
  }
  cv.stddev_accuracy = std::sqrt(sq / static_cast<double>(cv.folds.size()));
}

std::vector<double> payload_scores(const PayloadModel& model,
                                   std::span<const LabeledPayload> samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  for (const auto& s : samples) scores.push_back(model.score(s.payload));
  return scores;
}

double accuracy_of(std::span<const int> y, std::span<const double> scores, double threshold) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if ((scores[i] >= threshold ? 1 : 0) == y[i]) ++hits;
  }
  return y.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(y.size());
}

}  // namespace

PayloadModel train_payload_model(std::span<const LabeledPayload> corpus,
                                 const ml::LogisticHyper& hyper) {
  if (corpus.empty()) throw DataError("payload corpus is empty");
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& s : corpus) texts.push_back(s.payload);
  auto featurizer = PayloadFeaturizer::fit(texts);
  std::vector<ml::FeatureVector> X;
  X.reserve(corpus.size());
  for (const auto& t : texts) X.push_back(featurizer.featurize(t));
  const auto y = labels_of(corpus);
  auto logistic = ml::lr_train(X, y, hyper);
  return PayloadModel(std::move(featurizer), std::move(logistic));
}

CrossValidationResult cross_validate_payload(std::span<const LabeledPayload> corpus,
                                             int k, std::uint64_t seed,
                                             const ml::LogisticHyper& hyper,
                                             double threshold) {
  const auto y = labels_of(corpus);
  const auto folds = ml::stratified_kfold(y, k, seed);
  CrossValidationResult cv{k, seed, {}, {}, 0.0, 0.0};
  std::vector<double> oof(corpus.size(), 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = pick(corpus, std::span<const std::size_t>(ml::training_indices(folds, f)));
    const auto test = pick(corpus, std::span<const std::size_t>(folds[f]));
    const auto model = train_payload_model(train, hyper);
    const auto scores = payload_scores(model, test);
    for (std::size_t i = 0; i < folds[f].size(); ++i) oof[folds[f][i]] = scores[i];
    cv.folds.push_back(ml::evaluate_scores(labels_of(test), scores, threshold));
  }
  cv.pooled = ml::evaluate_scores(y, oof, threshold);
  summarize(cv);
  return cv;
}

ml::EvalReport evaluate_payload_model(const PayloadModel& model,
                                      std::span<const LabeledPayload> samples,
                                      double threshold) {
  if (samples.empty()) throw DataError("evaluation set is empty");
  return ml::evaluate_scores(labels_of(samples), payload_scores(model, samples), threshold);
}

std::vector<LearningCurvePoint> payload_learning_curve(
    std::span<const LabeledPayload> corpus, int k, std::uint64_t seed,
    const ml::LogisticHyper& hyper, std::span<const double> fractions) {
  const auto y = labels_of(corpus);
  const auto folds = ml::stratified_kfold(y, k, seed);
  std::vector<LearningCurvePoint> curve;
  for (double fraction : fractions) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
      throw DataError("learning-curve fractions must lie in (0, 1]");
    }
    LearningCurvePoint point{fraction, 0, 0.0, 0.0};
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::map<int, std::vector<std::size_t>> by_class;
      for (auto i : ml::training_indices(folds, f)) by_class[y[i]].push_back(i);
      std::mt19937_64 rng(seed + f);
      std::vector<std::size_t> subset;
      for (auto& [label, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        const auto take = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(fraction * members.size())));
        subset.insert(subset.end(), members.begin(),
                      members.begin() + static_cast<std::ptrdiff_t>(take));
      }
      std::sort(subset.begin(), subset.end());
      const auto train = pick(corpus, std::span<const std::size_t>(subset));
      const auto test = pick(corpus, std::span<const std::size_t>(folds[f]));
      const auto model = train_payload_model(train, hyper);
      point.train_size += train.size();
      point.train_accuracy += accuracy_of(labels_of(train), payload_scores(model, train), 0.5);
      point.validation_accuracy +=
          accuracy_of(labels_of(test), payload_scores(model, test), 0.5);
    }
    const auto n = static_cast<double>(folds.size());
    point.train_size = static_cast<std::size_t>(std::llround(point.train_size / n));
    point.train_accuracy /= n;
    point.validation_accuracy /= n;
    curve.push_back(point);
  }
  return curve;
}

ml::DecisionTreeModel train_encrypted_model(std::span<const EncryptedFlowRecord> records,
                                            const ml::TreeHyper& hyper) {
  if (records.empty()) throw DataError("flow dataset is empty");
  const auto y = labels_of(records);
  const auto X = encode_all(records);
  return ml::dt_train(X, y, hyper);
}

CrossValidationResult cross_validate_encrypted(std::span<const EncryptedFlowRecord> records,
                                               int k, std::uint64_t seed,
                                               const ml::TreeHyper& hyper) {
  const auto y = labels_of(records);
  const auto folds = ml::stratified_kfold(y, k, seed);
  CrossValidationResult cv{k, seed, {}, {}, 0.0, 0.0};
  std::vector<double> oof(records.size(), 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train = pick(records, std::span<const std::size_t>(ml::training_indices(folds, f)));
    const auto test = pick(records, std::span<const std::size_t>(folds[f]));
    const auto model = train_encrypted_model(train, hyper);
    cv.folds.push_back(evaluate_encrypted_model(model, test));
    for (std::size_t i = 0; i < folds[f].size(); ++i) {
      const auto x = encode(test[i]);
      oof[folds[f][i]] = ml::dt_predict(model, x).probability;
    }
  }
  cv.pooled = ml::evaluate_scores(y, oof, 0.5);
  summarize(cv);
  return cv;
}

ml::EvalReport evaluate_encrypted_model(const ml::DecisionTreeModel& model,
                                        std::span<const EncryptedFlowRecord> records) {
  if (records.empty()) throw DataError("evaluation set is empty");
  const auto y = labels_of(records);
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const auto& r : records) scores.push_back(ml::dt_predict(model, encode(r)).probability);
  return ml::evaluate_scores(y, scores, 0.5);
}

}  // namespace adpi
