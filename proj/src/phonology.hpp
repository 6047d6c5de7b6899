#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cognate::phonology {

// Character -> binary phonological feature vector. Loaded from CSV with
// header `codepoint_hex,<feature>,...`; all vectors share one dimension and
// every component is 0 or 1.
class PhoneticFeatureTable {
 public:
  static PhoneticFeatureTable load_csv(const std::filesystem::path& path);
  static PhoneticFeatureTable parse_csv(std::string_view text,
                                        std::string_view origin);
  // Table compiled in from data/phonetic_devanagari.csv (F = 38).
  static const PhoneticFeatureTable& builtin();

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }

  // nullptr when the codepoint has no row.
  const std::vector<double>* find(char32_t cp) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<char32_t, std::vector<double>> entries_;
};

// Raw CSV text of the shipped default table (generated at build time).
const char* builtin_table_csv();

struct WordVector {
  std::vector<double> values;
  bool oov = false;  // no character of the word was covered by the table
};

// Mean of the feature vectors of covered characters; uncovered characters are
// skipped. A word with zero covered characters yields the zero vector + oov.
WordVector word_phonetic_vector(std::u32string_view word,
                                const PhoneticFeatureTable& table);
WordVector word_phonetic_vector_utf8(std::string_view word,
                                     const PhoneticFeatureTable& table);

// 0.0 with the degenerate flag when either vector is zero.
double cosine_similarity(std::span<const double> u, std::span<const double> v,
                         bool* degenerate = nullptr);

struct PhoneticFeatureSet {
  std::vector<double> pv_s, pv_t;    // word vectors
  std::vector<double> pcv_s, pcv_t;  // context vectors (mean over tokens)
  double score1 = 0.0;               // cosine(pv_s, pv_t), clamped to [0,1]
  double score2 = 0.0;               // cosine(pcv_s, pcv_t), clamped
  double p_s1 = 0.5, p_s2 = 0.5;
  bool word_oov_s = false, word_oov_t = false;
  bool context_empty_s = false, context_empty_t = false;
  bool degenerate = false;  // any cosine hit a zero vector
};

PhoneticFeatureSet phonetic_features(std::u32string_view word_s,
                                     std::u32string_view word_t,
                                     std::span<const std::u32string> context_s,
                                     std::span<const std::u32string> context_t,
                                     const PhoneticFeatureTable& table);

}  // namespace cognate::phonology
