#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cognate::embeddings {

// word2vec text format: header line `<vocab_count> <dimension>`, then one
// `word v1 ... vd` row per line. Duplicate words keep the first occurrence.
class EmbeddingTable {
 public:
  static EmbeddingTable load(const std::filesystem::path& path,
                             std::string language,
                             std::string source_tag = "");

  const std::string& language() const { return language_; }
  const std::string& source_tag() const { return source_tag_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  std::size_t duplicate_count() const { return duplicate_count_; }

  struct Lookup {
    std::span<const double> values;  // zero vector when oov
    bool oov = false;
  };
  Lookup lookup(std::string_view word) const;

  bool contains(std::string_view word) const {
    return index_.find(word) != index_.end();
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::string language_;
  std::string source_tag_;
  std::size_t dimension_ = 0;
  std::size_t duplicate_count_ = 0;
  std::vector<double> storage_;  // row-major, one row per vocab entry
  std::vector<double> zero_;     // returned for oov lookups
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>
      index_;  // word -> row offset
};

// 1 - arccos(clamp(cos, -1, 1)) / pi. Zero vector on either side yields 0.0
// with the degenerate flag (maximally dissimilar / unknown).
double angular_similarity(std::span<const double> u, std::span<const double> v,
                          bool* degenerate = nullptr);

struct CrossLingualFeatureSet {
  std::vector<double> wv_s, wv_t;  // word lookups
  std::vector<double> cv_s, cv_t;  // mean over context-token lookups
  double score1 = 0.0;             // angular_similarity(wv_s, wv_t)
  double score2 = 0.0;             // angular_similarity(cv_s, cv_t)
  double s1 = 0.5, s2 = 0.5;
  bool oov_word_s = false, oov_word_t = false;
  std::size_t oov_context_s = 0, oov_context_t = 0;  // oov tokens per side
  bool context_empty_s = false, context_empty_t = false;
  bool degenerate = false;
};

// skip_oov_context drops oov tokens from the context mean instead of
// averaging in their zero vectors.
CrossLingualFeatureSet crosslingual_features(
    std::string_view word_s, std::string_view word_t,
    std::span<const std::string> context_s,
    std::span<const std::string> context_t, const EmbeddingTable& src,
    const EmbeddingTable& tgt, bool skip_oov_context = false);

}  // namespace cognate::embeddings
