#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cognate::context {

// Per-word bag of context tokens built from wordnet-style records:
//   word TAB gloss TAB example1 | example2 | ...
// Tokens are whitespace-split, stripped of surrounding danda/ASCII
// punctuation, transliterated to Devanagari, and filtered against the
// stopword list. Duplicates are kept; entry order is first appearance.
class ContextDictionary {
 public:
  struct Entry {
    std::string word;
    std::vector<std::string> tokens;
  };

  static ContextDictionary build(const std::filesystem::path& wordnet_export,
                                 const std::filesystem::path* stopwords,
                                 std::string language);
  static ContextDictionary empty(std::string language);

  const std::string& language() const { return language_; }
  bool stopwords_applied() const { return stopwords_applied_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t token_count() const { return token_count_; }
  std::size_t skipped_records() const { return skipped_records_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // nullptr when the word has no entry (the miss case); a present word whose
  // tokens were all stopworded away returns an empty list instead.
  const std::vector<std::string>* context_of(std::string_view word) const;

  // One `word TAB space-joined-tokens` line per entry; the output re-parses
  // through build() as gloss-only records.
  void save(const std::filesystem::path& path) const;

 private:
  std::string language_;
  bool stopwords_applied_ = false;
  std::size_t token_count_ = 0;
  std::size_t skipped_records_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One token per line, transliterated to Devanagari to match entry tokens.
std::vector<std::string> load_stopwords(const std::filesystem::path& path);

// Whitespace-split + strip of leading/trailing danda and ASCII punctuation.
// Empty results are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Labeled candidate pair from the dataset TSV:
//   lang_pair TAB word_s TAB word_t TAB label   (label in {1,0})
struct WordPair {
  std::string language_pair;
  std::string word_s;  // transliterated to Devanagari on load
  std::string word_t;
  int label = 0;
  std::string pair_id;  // "L<line>" of the source row
};

struct Dataset {
  std::vector<WordPair> pairs;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t skipped_rows = 0;  // malformed or empty-after-transliteration
};

// With require_label false, 3-field rows are accepted and labeled 0.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::string>& lang_pair_filter = {},
                     bool require_label = true);

}  // namespace cognate::context
