#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adpi/ml/sparse.hpp"

namespace adpi {

/// Decodes UTF-8, replacing every invalid or truncated sequence with U+FFFD.
std::u32string decode_utf8_lossy(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);

/// Every run of three consecutive characters, in order, duplicates kept.
/// Characters are Unicode code points of the lossily decoded payload.
std::vector<std::string> trigrams(std::string_view payload);

/// Tri-gram vocabulary with smoothed inverse document frequencies.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  /// Rebuilds a fitted model. `vocabulary` must be sorted and unique and the
  /// same length as `idf`; throws ConfigError otherwise.
  TfIdfModel(std::vector<std::string> vocabulary, std::vector<double> idf,
             std::size_t n_docs);

  /// idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1 where df(t) counts payloads
  /// containing t. Throws DataError on an empty corpus.
  static TfIdfModel fit(std::span<const std::string> corpus);

  /// Entries (index, tf * idf) for the in-vocabulary tri-grams of `payload`,
  /// tf being the relative count among all of the payload's tri-grams.
  std::vector<ml::SparseEntry> transform(std::string_view payload) const;

  std::size_t size() const { return vocabulary_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  /// Column of a tri-gram, or -1.
  std::int64_t index_of(std::string_view trigram) const;

 private:
  void build_index();

  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline constexpr std::size_t kLinguisticFeatureCount = 5;

struct LinguisticFeatures {
  int digits = 0;
  /// Sum of lengths of maximal digit runs of length >= 2.
  int consecutive_digits = 0;
  /// Sum of lengths of maximal consonant runs of length >= 2; 'y' counts.
  int consecutive_consonants = 0;
  /// Distinct letters (case-folded) that occur more than once.
  int repeated_letters = 0;
  int vowels = 0;

  std::array<double, kLinguisticFeatureCount> as_array() const;

  friend bool operator==(const LinguisticFeatures&, const LinguisticFeatures&) = default;
};

LinguisticFeatures linguistic_features(std::string_view payload);

/// Per-feature training extremes for min-max scaling.
struct NormalizationParams {
  std::array<double, kLinguisticFeatureCount> l_min{};
  std::array<double, kLinguisticFeatureCount> l_max{};

  /// Throws DataError on empty input.
  static NormalizationParams fit(std::span<const LinguisticFeatures> rows);

  /// (l - l_min) / (l_max - l_min) clamped to [0, 1]; a constant feature
  /// maps to 0.
  std::array<double, kLinguisticFeatureCount> normalize(
      const LinguisticFeatures& features) const;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

/// Tri-gram TF-IDF block followed by the five normalized linguistic
/// features, as one sparse row of dimension |vocabulary| + 5.
class PayloadFeaturizer {
 public:
  PayloadFeaturizer() = default;
  PayloadFeaturizer(TfIdfModel tfidf, NormalizationParams norm)
      : tfidf_(std::move(tfidf)), norm_(norm) {}

  static PayloadFeaturizer fit(std::span<const std::string> corpus);

  ml::FeatureVector featurize(std::string_view payload) const;
  std::size_t dimension() const { return tfidf_.size() + kLinguisticFeatureCount; }

  const TfIdfModel& tfidf() const { return tfidf_; }
  const NormalizationParams& normalization() const { return norm_; }

 private:
  TfIdfModel tfidf_;
  NormalizationParams norm_;
};

}  // namespace adpi
