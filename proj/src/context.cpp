#include "context.hpp"

#include <fstream>
#include <unordered_set>

#include "error.hpp"
#include "script.hpp"
#include "utf8.hpp"

namespace cognate::context {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool is_strippable(char32_t cp) {
  if (cp == 0x0964 || cp == 0x0965) return true;  // danda, double danda
  if (cp < 0x80) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  }
  return false;
}

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == 0x00A0 || cp == 0x2000 || cp == 0x2001 || cp == 0x2002 ||
         cp == 0x2003 || cp == 0x2009 || cp == 0x200B || cp == 0x3000;
}

std::string strip_token(std::u32string_view token) {
  std::size_t begin = 0, end = token.size();
  while (begin < end && is_strippable(token[begin])) ++begin;
  while (end > begin && is_strippable(token[end - 1])) --end;
  return utf8::encode(token.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string decoded = utf8::decode(text);
  std::size_t i = 0;
  while (i < decoded.size()) {
    while (i < decoded.size() && is_space(decoded[i])) ++i;
    std::size_t j = i;
    while (j < decoded.size() && !is_space(decoded[j])) ++j;
    if (j > i) {
      std::string tok = strip_token(
          std::u32string_view(decoded.data() + i, j - i));
      if (!tok.empty()) tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open stopword list: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (auto& tok : tokenize(line)) {
      words.push_back(script::to_devanagari(tok).text);
    }
  }
  return words;
}

ContextDictionary ContextDictionary::empty(std::string language) {
  ContextDictionary dict;
  dict.language_ = std::move(language);
  return dict;
}

ContextDictionary ContextDictionary::build(
    const std::filesystem::path& wordnet_export,
    const std::filesystem::path* stopwords, std::string language) {
  std::ifstream in(wordnet_export, std::ios::binary);
  if (!in) {
    raise(ErrorCode::Io,
          "cannot open wordnet export: " + wordnet_export.string());
  }

  std::unordered_set<std::string> stopset;
  ContextDictionary dict;
  dict.language_ = std::move(language);
  if (stopwords != nullptr) {
    for (auto& w : load_stopwords(*stopwords)) stopset.insert(std::move(w));
    dict.stopwords_applied_ = true;
  }

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 2) {
      ++dict.skipped_records_;
      continue;
    }
    const std::string word = script::to_devanagari(fields[0]).text;
    if (word.empty()) {
      ++dict.skipped_records_;
      continue;
    }
    std::string text = fields[1];
    for (std::size_t i = 2; i < fields.size(); ++i) {
      text += ' ';
      text += fields[i];
    }
    std::vector<std::string> tokens;
    for (const auto& raw : tokenize(text)) {
      std::string tok = script::to_devanagari(raw).text;
      if (tok.empty() || stopset.count(tok)) continue;
      tokens.push_back(std::move(tok));
    }

    const auto [it, fresh] = dict.index_.emplace(word, dict.entries_.size());
    if (fresh) {
      dict.entries_.push_back({word, std::move(tokens)});
      dict.token_count_ += dict.entries_.back().tokens.size();
    } else {
      auto& entry = dict.entries_[it->second];
      dict.token_count_ += tokens.size();
      for (auto& tok : tokens) entry.tokens.push_back(std::move(tok));
    }
  }
  return dict;
}

const std::vector<std::string>* ContextDictionary::context_of(
    std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return nullptr;
  return &entries_[it->second].tokens;
}

void ContextDictionary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    raise(ErrorCode::Io, "cannot write context dictionary: " + path.string());
  }
  for (const auto& entry : entries_) {
    out << entry.word << '\t';
    for (std::size_t i = 0; i < entry.tokens.size(); ++i) {
      if (i) out << ' ';
      out << entry.tokens[i];
    }
    out << '\n';
  }
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::string>& lang_pair_filter,
                     bool require_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open dataset: " + path.string());

  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < (require_label ? 4u : 3u)) {
      ++data.skipped_rows;
      continue;
    }
    if (lang_pair_filter && fields[0] != *lang_pair_filter) continue;
    const std::string label = fields.size() >= 4 ? fields[3] : "0";
    if (label != "0" && label != "1") {
      raise(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                  ": label must be 0 or 1, got '" + label +
                                  "'");
    }
    WordPair pair;
    pair.language_pair = fields[0];
    pair.word_s = script::to_devanagari(fields[1]).text;
    pair.word_t = script::to_devanagari(fields[2]).text;
    pair.label = label == "1" ? 1 : 0;
    pair.pair_id = "L" + std::to_string(line_no);
    if (pair.word_s.empty() || pair.word_t.empty()) {
      ++data.skipped_rows;
      continue;
    }
    (pair.label ? data.positives : data.negatives) += 1;
    data.pairs.push_back(std::move(pair));
  }
  return data;
}

}  // namespace cognate::context
