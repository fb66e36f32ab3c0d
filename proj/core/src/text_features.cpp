#include "adpi/text_features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "adpi/errors.hpp"

namespace adpi {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

char32_t ascii_lower(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + (U'a' - U'A') : c;
}

bool is_ascii_letter(char32_t c) {
  c = ascii_lower(c);
  return c >= U'a' && c <= U'z';
}

bool is_vowel(char32_t c) {
  c = ascii_lower(c);
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u';
}

bool is_consonant(char32_t c) { return is_ascii_letter(c) && !is_vowel(c); }

template <typename Pred>
int run_length_sum(const std::u32string& text, Pred pred, int min_run) {
  int total = 0;
  int run = 0;
  for (char32_t c : text) {
    if (pred(c)) {
      ++run;
      continue;
    }
    if (run >= min_run) total += run;
    run = 0;
  }
  if (run >= min_run) total += run;
  return total;
}

}  // namespace

std::u32string decode_utf8_lossy(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min_cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min_cp = 0x10000;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    int consumed = 1;
    bool ok = true;
    for (; consumed < len; ++consumed) {
      if (i + consumed >= bytes.size()) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(bytes[i + consumed]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (ok && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    out.push_back(ok ? cp : kReplacement);
    i += static_cast<std::size_t>(consumed);
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::vector<std::string> trigrams(std::string_view payload) {
  const auto text = decode_utf8_lossy(payload);
  std::vector<std::string> out;
  if (text.size() < 3) return out;
  out.reserve(text.size() - 2);
  const std::u32string_view view(text);
  for (std::size_t i = 0; i + 3 <= view.size(); ++i) {
    out.push_back(encode_utf8(view.substr(i, 3)));
  }
  return out;
}

TfIdfModel::TfIdfModel(std::vector<std::string> vocabulary, std::vector<double> idf,
                       std::size_t n_docs)
    : vocabulary_(std::move(vocabulary)), idf_(std::move(idf)), n_docs_(n_docs) {
  if (vocabulary_.size() != idf_.size()) {
    throw ConfigError("tf-idf vocabulary and idf lengths differ");
  }
  for (std::size_t i = 1; i < vocabulary_.size(); ++i) {
    if (!(vocabulary_[i - 1] < vocabulary_[i])) {
      throw ConfigError("tf-idf vocabulary must be sorted and unique");
    }
  }
  for (double w : idf_) {
    if (!std::isfinite(w) || w < 0.0) throw ConfigError("idf weights must be finite and >= 0");
  }
  build_index();
}

TfIdfModel TfIdfModel::fit(std::span<const std::string> corpus) {
  if (corpus.empty()) throw DataError("cannot fit tf-idf on an empty corpus");
  std::map<std::string, std::size_t> document_frequency;
  for (const auto& payload : corpus) {
    auto grams = trigrams(payload);
    std::set<std::string> unique(std::make_move_iterator(grams.begin()),
                                 std::make_move_iterator(grams.end()));
    for (const auto& g : unique) ++document_frequency[g];
  }
  TfIdfModel model;
  model.n_docs_ = corpus.size();
  model.vocabulary_.reserve(document_frequency.size());
  model.idf_.reserve(document_frequency.size());
  const double numerator = 1.0 + static_cast<double>(corpus.size());
  for (const auto& [gram, df] : document_frequency) {
    model.vocabulary_.push_back(gram);
    model.idf_.push_back(std::log(numerator / (1.0 + static_cast<double>(df))) + 1.0);
  }
  model.build_index();
  return model;
}

void TfIdfModel::build_index() {
  index_.clear();
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    index_.emplace(vocabulary_[i], static_cast<std::uint32_t>(i));
  }
}

std::int64_t TfIdfModel::index_of(std::string_view trigram) const {
  auto it = index_.find(std::string(trigram));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<ml::SparseEntry> TfIdfModel::transform(std::string_view payload) const {
  const auto grams = trigrams(payload);
  std::map<std::uint32_t, int> counts;
  for (const auto& g : grams) {
    if (auto it = index_.find(g); it != index_.end()) ++counts[it->second];
  }
  std::vector<ml::SparseEntry> out;
  out.reserve(counts.size());
  const double total = static_cast<double>(grams.size());
  for (const auto& [index, count] : counts) {
    out.push_back({index, (static_cast<double>(count) / total) * idf_[index]});
  }
  return out;
}

std::array<double, kLinguisticFeatureCount> LinguisticFeatures::as_array() const {
  return {static_cast<double>(digits), static_cast<double>(consecutive_digits),
          static_cast<double>(consecutive_consonants),
          static_cast<double>(repeated_letters), static_cast<double>(vowels)};
}

LinguisticFeatures linguistic_features(std::string_view payload) {
  const auto text = decode_utf8_lossy(payload);
  LinguisticFeatures f;
  std::array<int, 26> letter_counts{};
  for (char32_t c : text) {
    if (is_ascii_digit(c)) ++f.digits;
    if (is_vowel(c)) ++f.vowels;
    if (is_ascii_letter(c)) ++letter_counts[ascii_lower(c) - U'a'];
  }
  f.consecutive_digits = run_length_sum(text, is_ascii_digit, 2);
  f.consecutive_consonants = run_length_sum(text, is_consonant, 2);
  f.repeated_letters = static_cast<int>(
      std::count_if(letter_counts.begin(), letter_counts.end(), [](int n) { return n > 1; }));
  return f;
}

NormalizationParams NormalizationParams::fit(std::span<const LinguisticFeatures> rows) {
  if (rows.empty()) throw DataError("cannot fit normalization on zero rows");
  NormalizationParams params;
  params.l_min = rows.front().as_array();
  params.l_max = params.l_min;
  for (const auto& row : rows.subspan(1)) {
    const auto values = row.as_array();
    for (std::size_t j = 0; j < kLinguisticFeatureCount; ++j) {
      params.l_min[j] = std::min(params.l_min[j], values[j]);
      params.l_max[j] = std::max(params.l_max[j], values[j]);
    }
  }
  return params;
}

std::array<double, kLinguisticFeatureCount> NormalizationParams::normalize(
    const LinguisticFeatures& features) const {
  const auto values = features.as_array();
  std::array<double, kLinguisticFeatureCount> out{};
  for (std::size_t j = 0; j < kLinguisticFeatureCount; ++j) {
    const double range = l_max[j] - l_min[j];
    if (range <= 0.0) {
      out[j] = 0.0;
      continue;
    }
    out[j] = std::clamp((values[j] - l_min[j]) / range, 0.0, 1.0);
  }
  return out;
}

PayloadFeaturizer PayloadFeaturizer::fit(std::span<const std::string> corpus) {
  auto tfidf = TfIdfModel::fit(corpus);
  std::vector<LinguisticFeatures> rows;
  rows.reserve(corpus.size());
  for (const auto& payload : corpus) rows.push_back(linguistic_features(payload));
  return PayloadFeaturizer(std::move(tfidf), NormalizationParams::fit(rows));
}

ml::FeatureVector PayloadFeaturizer::featurize(std::string_view payload) const {
  ml::FeatureVector out{dimension(), tfidf_.transform(payload)};
  const auto normalized = norm_.normalize(linguistic_features(payload));
  const auto offset = static_cast<std::uint32_t>(tfidf_.size());
  for (std::size_t j = 0; j < kLinguisticFeatureCount; ++j) {
    if (normalized[j] != 0.0) {
      out.entries.push_back({offset + static_cast<std::uint32_t>(j), normalized[j]});
    }
  }
  return out;
}

}  // namespace adpi
