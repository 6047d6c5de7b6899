#include "augment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "utf8.hpp"

namespace cognate::augment {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open corpus: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

ParallelCorpus load_parallel(const std::filesystem::path& src_path,
                             const std::filesystem::path& tgt_path) {
  ParallelCorpus corpus;
  corpus.src_lines = read_lines(src_path);
  corpus.tgt_lines = read_lines(tgt_path);
  if (corpus.src_lines.size() != corpus.tgt_lines.size()) {
    raise(ErrorCode::Parse,
          "parallel corpus is misaligned: " + src_path.string() + " has " +
              std::to_string(corpus.src_lines.size()) + " lines, " +
              tgt_path.string() + " has " +
              std::to_string(corpus.tgt_lines.size()));
  }
  return corpus;
}

void save_parallel(const ParallelCorpus& corpus,
                   const std::filesystem::path& src_path,
                   const std::filesystem::path& tgt_path) {
  const auto write = [](const std::vector<std::string>& lines,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::Io, "cannot write corpus: " + path.string());
    for (const auto& line : lines) out << line << '\n';
  };
  write(corpus.src_lines, src_path);
  write(corpus.tgt_lines, tgt_path);
}

InjectStats inject_cognates(
    ParallelCorpus& corpus, std::span<const context::WordPair> cognates,
    const std::optional<std::string>& expected_lang_pair) {
  InjectStats stats;
  for (const auto& pair : cognates) {
    if (expected_lang_pair && pair.language_pair != *expected_lang_pair) {
      ++stats.skipped_lang_pair;
      continue;
    }
    if (pair.word_s.empty() || pair.word_t.empty()) {
      ++stats.skipped_empty;
      continue;
    }
    corpus.src_lines.push_back(pair.word_s);
    corpus.tgt_lines.push_back(pair.word_t);
    ++stats.appended;
  }
  return stats;
}

namespace {

using Symbols = std::vector<std::string>;
using SymbolPair = std::pair<std::string, std::string>;

Symbols split_symbols(std::string_view token) {
  Symbols symbols;
  for (char32_t cp : utf8::decode(token)) {
    symbols.push_back(utf8::encode(cp));
  }
  symbols.emplace_back(BpeModel::kEndOfWord);
  return symbols;
}

// Merges every adjacent occurrence of `pair`, scanning left to right.
Symbols merge_symbols(const Symbols& symbols, const SymbolPair& pair) {
  Symbols out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == pair.first &&
        symbols[i + 1] == pair.second) {
      out.push_back(symbols[i] + symbols[i + 1]);
      i += 2;
    } else {
      out.push_back(symbols[i]);
      ++i;
    }
  }
  return out;
}

struct PairHash {
  std::size_t operator()(const SymbolPair& p) const {
    const std::size_t h1 = std::hash<std::string>{}(p.first);
    const std::size_t h2 = std::hash<std::string>{}(p.second);
    return h1 ^ (h2 + 0x9E3779B97F4A7C15ULL + (h1 << 6) + (h1 >> 2));
  }
};

struct LearnState {
  std::vector<Symbols> words;
  std::vector<std::size_t> freqs;
  std::unordered_map<SymbolPair, long long, PairHash> pair_counts;
  std::unordered_map<SymbolPair, std::unordered_set<std::size_t>, PairHash>
      pair_words;

  void count_word(std::size_t w, long long sign) {
    const auto& symbols = words[w];
    const long long f = sign * static_cast<long long>(freqs[w]);
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const SymbolPair p{symbols[i], symbols[i + 1]};
      pair_counts[p] += f;
      if (sign > 0) {
        pair_words[p].insert(w);
      }
    }
  }
};

}  // namespace

BpeModel BpeModel::learn(std::span<const std::string> lines,
                         std::size_t merge_count) {
  if (lines.empty()) {
    raise(ErrorCode::InvalidArgument, "bpe_learn: empty corpus");
  }
  // Word frequencies over whitespace tokens.
  std::unordered_map<std::string, std::size_t> vocab;
  std::vector<std::string> order;
  for (const auto& line : lines) {
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) {
      const auto [it, fresh] = vocab.emplace(token, 0);
      if (fresh) order.push_back(token);
      ++it->second;
    }
  }
  if (order.empty()) {
    raise(ErrorCode::InvalidArgument, "bpe_learn: corpus has no tokens");
  }

  LearnState state;
  state.words.reserve(order.size());
  state.freqs.reserve(order.size());
  for (const auto& token : order) {
    state.words.push_back(split_symbols(token));
    state.freqs.push_back(vocab[token]);
  }
  for (std::size_t w = 0; w < state.words.size(); ++w) {
    state.count_word(w, +1);
  }

  BpeModel model;
  for (std::size_t step = 0; step < merge_count; ++step) {
    // Most frequent pair; ties to the lexicographically smallest.
    const SymbolPair* best = nullptr;
    long long best_count = 0;
    for (const auto& [pair, count] : state.pair_counts) {
      if (count > best_count ||
          (count == best_count && best != nullptr && pair < *best)) {
        best = &pair;
        best_count = count;
      }
    }
    if (best == nullptr || best_count < 2) break;  // early stop

    const SymbolPair merge = *best;
    model.merges_.push_back(merge);

    const auto affected_it = state.pair_words.find(merge);
    std::vector<std::size_t> affected(affected_it->second.begin(),
                                      affected_it->second.end());
    std::sort(affected.begin(), affected.end());
    for (const std::size_t w : affected) {
      state.count_word(w, -1);
      state.words[w] = merge_symbols(state.words[w], merge);
      state.count_word(w, +1);
    }
    // Drop emptied counters so the max scan stays clean.
    for (auto it = state.pair_counts.begin();
         it != state.pair_counts.end();) {
      it = it->second <= 0 ? state.pair_counts.erase(it) : std::next(it);
    }
  }
  return model;
}

std::string BpeModel::apply_token(std::string_view token) const {
  Symbols symbols = split_symbols(token);
  for (const auto& merge : merges_) {
    if (symbols.size() < 2) break;
    symbols = merge_symbols(symbols, merge);
  }
  // Drop the end-of-word marker and join with "@@ " on non-final subwords.
  if (!symbols.empty() && symbols.back() == kEndOfWord) {
    symbols.pop_back();
  } else if (!symbols.empty() && symbols.back().size() >= kEndOfWord.size() &&
             symbols.back().ends_with(kEndOfWord)) {
    auto& last = symbols.back();
    last.resize(last.size() - kEndOfWord.size());
  }
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out += symbols[i];
    if (i + 1 < symbols.size()) out += kJoiner;
  }
  return out;
}

std::string BpeModel::apply_line(std::string_view line) const {
  std::istringstream ss{std::string(line)};
  std::string token;
  std::string out;
  bool first = true;
  while (ss >> token) {
    if (!first) out += ' ';
    out += apply_token(token);
    first = false;
  }
  return out;
}

void BpeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write merges: " + path.string());
  out << "#bpe-merges v1\n";
  for (const auto& [left, right] : merges_) {
    out << left << ' ' << right << '\n';
  }
}

BpeModel BpeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open merges: " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      (line != "#bpe-merges v1" && line != "#bpe-merges v1\r")) {
    raise(ErrorCode::Parse,
          path.string() + ":1: expected header '#bpe-merges v1'");
  }
  BpeModel model;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 ||
        space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      raise(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                  ": expected 'left right'");
    }
    model.merges_.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return model;
}

}  // namespace cognate::augment
