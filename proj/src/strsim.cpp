#include "strsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "utf8.hpp"

namespace cognate::strsim {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (m == 0) return n;
  std::vector<std::size_t> row(m + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[m];
}

std::size_t levenshtein_utf8(std::string_view a, std::string_view b) {
  return levenshtein(utf8::decode(a), utf8::decode(b));
}

double ned_similarity(std::u32string_view a, std::u32string_view b,
                      bool* degenerate) {
  if (degenerate) *degenerate = false;
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return 1.0 - static_cast<double>(levenshtein(a, b)) /
                   static_cast<double>(longest);
}

namespace {

std::map<std::u32string, long> qgram_counts(std::u32string_view s,
                                            std::size_t q) {
  std::map<std::u32string, long> counts;
  if (s.size() >= q) {
    for (std::size_t i = 0; i + q <= s.size(); ++i) {
      ++counts[std::u32string(s.substr(i, q))];
    }
  }
  return counts;
}

}  // namespace

std::size_t qgram_distance(std::u32string_view a, std::u32string_view b,
                           std::size_t q) {
  if (q == 0) raise(ErrorCode::InvalidArgument, "q-gram length must be >= 1");
  auto ca = qgram_counts(a, q);
  const auto cb = qgram_counts(b, q);
  long total = 0;
  for (const auto& [gram, count] : cb) ca[gram] -= count;
  for (const auto& [gram, count] : ca) total += std::abs(count);
  return static_cast<std::size_t>(total);
}

double qgram_similarity(std::u32string_view a, std::u32string_view b,
                        std::size_t q) {
  if (q == 0) raise(ErrorCode::InvalidArgument, "q-gram length must be >= 1");
  const auto grams_in = [q](std::u32string_view s) {
    return s.size() >= q ? s.size() - q + 1 : std::size_t{0};
  };
  const std::size_t total = grams_in(a) + grams_in(b);
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(qgram_distance(a, b, q)) /
                   static_cast<double>(total);
}

double wls(std::u32string_view a, std::u32string_view b, std::size_t q,
           bool* degenerate) {
  return 0.75 * ned_similarity(a, b, degenerate) +
         0.25 * qgram_similarity(a, b, q);
}

double wls_utf8(std::string_view a, std::string_view b, std::size_t q,
                bool* degenerate) {
  return wls(utf8::decode(a), utf8::decode(b), q, degenerate);
}

ScorePair normalize_pair(double score1, double score2) {
  if (!std::isfinite(score1) || !std::isfinite(score2) || score1 < 0.0 ||
      score2 < 0.0) {
    raise(ErrorCode::Domain,
          "normalize_pair requires finite non-negative scores");
  }
  ScorePair out;
  out.score1 = score1;
  out.score2 = score2;
  const double sum = score1 + score2;
  if (sum == 0.0) {
    out.s1 = 0.5;
    out.s2 = 0.5;
  } else {
    out.s1 = score1 / sum;
    out.s2 = score2 / sum;
  }
  return out;
}

namespace {

struct WeightedToken {
  const std::u32string* token;
  std::size_t count;
};

// Distinct tokens ranked by (frequency desc, first appearance), capped.
std::vector<WeightedToken> top_tokens(std::span<const std::u32string> tokens,
                                      std::size_t cap) {
  std::vector<WeightedToken> distinct;
  std::unordered_map<std::u32string_view, std::size_t> index;
  for (const auto& tok : tokens) {
    auto [it, fresh] = index.emplace(tok, distinct.size());
    if (fresh) {
      distinct.push_back({&tok, 1});
    } else {
      ++distinct[it->second].count;
    }
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const WeightedToken& x, const WeightedToken& y) {
                     return x.count > y.count;
                   });
  if (distinct.size() > cap) distinct.resize(cap);
  return distinct;
}

}  // namespace

double wls_context_score(std::span<const std::u32string> src_tokens,
                         std::span<const std::u32string> tgt_tokens,
                         std::size_t q, std::size_t cap, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (src_tokens.empty() || tgt_tokens.empty()) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  const auto src = top_tokens(src_tokens, cap);
  const auto tgt = top_tokens(tgt_tokens, cap);
  double sum = 0.0;
  double weight = 0.0;
  for (const auto& s : src) {
    for (const auto& t : tgt) {
      const double w = static_cast<double>(s.count) * t.count;
      sum += w * wls(*s.token, *t.token, q);
      weight += w;
    }
  }
  return sum / weight;
}

}  // namespace cognate::strsim
