#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace cognate::strsim {

// Unit-cost edit distance over Unicode codepoints.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein_utf8(std::string_view a, std::string_view b);

// 1 - lev/max(|a|,|b|). Both-empty input is defined as 1.0 and sets the
// degenerate flag when one is supplied.
double ned_similarity(std::u32string_view a, std::u32string_view b,
                      bool* degenerate = nullptr);

// L1 distance between multisets of contiguous length-q codepoint substrings.
std::size_t qgram_distance(std::u32string_view a, std::u32string_view b,
                           std::size_t q);

// 1 - distance/(Na + Nb) with Nx = max(|x| - q + 1, 0); 1.0 when Na + Nb == 0.
double qgram_similarity(std::u32string_view a, std::u32string_view b,
                        std::size_t q);

// 0.75 * ned_similarity + 0.25 * qgram_similarity.
double wls(std::u32string_view a, std::u32string_view b, std::size_t q = 2,
           bool* degenerate = nullptr);
double wls_utf8(std::string_view a, std::string_view b, std::size_t q = 2,
                bool* degenerate = nullptr);

struct ScorePair {
  double score1 = 0.0;
  double score2 = 0.0;
  double s1 = 0.0;  // score1 / (score1 + score2)
  double s2 = 0.0;  // score2 / (score1 + score2)
};

// Rejects negative or non-finite inputs with a Domain error. Both-zero input
// maps to the neutral (0.5, 0.5).
ScorePair normalize_pair(double score1, double score2);

// Contextual wls: the mean of wls over the Cartesian product of the two token
// lists, each side restricted to its `cap` most frequent distinct tokens
// (multiplicities kept, ties by first appearance). Empty input on either side
// yields 0 and sets the degenerate flag.
double wls_context_score(std::span<const std::u32string> src_tokens,
                         std::span<const std::u32string> tgt_tokens,
                         std::size_t q = 2, std::size_t cap = 50,
                         bool* degenerate = nullptr);

}  // namespace cognate::strsim
