#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "context.hpp"

namespace cognate::augment {

struct ParallelCorpus {
  std::vector<std::string> src_lines;
  std::vector<std::string> tgt_lines;
};

// Raises Parse when the two files disagree on line count.
ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path);
void save_parallel(const ParallelCorpus& corpus,
                   const std::filesystem::path& src_path,
                   const std::filesystem::path& tgt_path);

struct InjectStats {
  std::size_t appended = 0;
  std::size_t skipped_empty = 0;      // pairs with an empty word
  std::size_t skipped_lang_pair = 0;  // pairs not matching the expected pair
};

// Appends each cognate as one aligned single-word line pair after the
// original corpus; original lines are untouched.
InjectStats inject_cognates(
    ParallelCorpus& corpus, std::span<const context::WordPair> cognates,
    const std::optional<std::string>& expected_lang_pair = {});

// Subword byte-pair encoding: words become codepoint sequences plus a
// terminal end-of-word symbol; learning repeatedly merges the most frequent
// adjacent pair (ties to the lexicographically smallest pair), stopping early
// when no pair occurs at least twice.
class BpeModel {
 public:
  static constexpr std::string_view kEndOfWord = "</w>";
  static constexpr std::string_view kJoiner = "@@ ";

  static BpeModel learn(std::span<const std::string> lines,
                        std::size_t merge_count);

  const std::vector<std::pair<std::string, std::string>>& merges() const {
    return merges_;
  }

  // Replays merges in priority order; non-final subwords carry the "@@ "
  // joiner, e.g. "aa@@ a@@ b".
  std::string apply_token(std::string_view token) const;
  std::string apply_line(std::string_view line) const;

  // `#bpe-merges v1` header, then one `left right` per line.
  void save(const std::filesystem::path& path) const;
  static BpeModel load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> merges_;
};

}  // namespace cognate::augment
