#include "phonology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "strsim.hpp"
#include "utf8.hpp"

namespace cognate::phonology {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

PhoneticFeatureTable PhoneticFeatureTable::parse_csv(std::string_view text,
                                                     std::string_view origin) {
  PhoneticFeatureTable table;
  std::istringstream input{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() < 2 || fields[0] != "codepoint_hex") {
        raise(ErrorCode::Parse,
              std::string(origin) + ":" + std::to_string(line_no) +
                  ": expected header starting with codepoint_hex");
      }
      table.dimension_ = fields.size() - 1;
      table.names_.assign(fields.begin() + 1, fields.end());
      header_seen = true;
      continue;
    }
    const std::string where =
        std::string(origin) + ":" + std::to_string(line_no);
    if (fields.size() != table.dimension_ + 1) {
      raise(ErrorCode::Parse, where + ": expected " +
                                  std::to_string(table.dimension_ + 1) +
                                  " fields, got " +
                                  std::to_string(fields.size()));
    }
    char32_t cp = 0;
    try {
      cp = static_cast<char32_t>(std::stoul(fields[0], nullptr, 16));
    } catch (const std::exception&) {
      raise(ErrorCode::Parse, where + ": bad codepoint '" + fields[0] + "'");
    }
    std::vector<double> vec(table.dimension_);
    for (std::size_t i = 0; i < table.dimension_; ++i) {
      if (fields[i + 1] == "0") {
        vec[i] = 0.0;
      } else if (fields[i + 1] == "1") {
        vec[i] = 1.0;
      } else {
        raise(ErrorCode::Parse,
              where + ": feature values must be 0 or 1, got '" +
                  fields[i + 1] + "'");
      }
    }
    table.entries_[cp] = std::move(vec);
  }
  if (!header_seen) {
    raise(ErrorCode::Parse, std::string(origin) + ": empty table file");
  }
  return table;
}

PhoneticFeatureTable PhoneticFeatureTable::load_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::Io, "cannot open phonetic table: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

const PhoneticFeatureTable& PhoneticFeatureTable::builtin() {
  static const PhoneticFeatureTable table =
      parse_csv(builtin_table_csv(), "<builtin>");
  return table;
}

const std::vector<double>* PhoneticFeatureTable::find(char32_t cp) const {
  const auto it = entries_.find(cp);
  return it == entries_.end() ? nullptr : &it->second;
}

WordVector word_phonetic_vector(std::u32string_view word,
                                const PhoneticFeatureTable& table) {
  WordVector out;
  out.values.assign(table.dimension(), 0.0);
  std::size_t covered = 0;
  for (char32_t cp : word) {
    if (const auto* vec = table.find(cp)) {
      for (std::size_t i = 0; i < vec->size(); ++i) out.values[i] += (*vec)[i];
      ++covered;
    }
  }
  if (covered == 0) {
    out.oov = true;
    return out;
  }
  for (double& v : out.values) v /= static_cast<double>(covered);
  return out;
}

WordVector word_phonetic_vector_utf8(std::string_view word,
                                     const PhoneticFeatureTable& table) {
  return word_phonetic_vector(utf8::decode(word), table);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v,
                         bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (u.size() != v.size()) {
    raise(ErrorCode::InvalidArgument, "cosine: dimension mismatch");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

namespace {

// Mean of word vectors over context tokens; every token contributes (zero
// vector when fully uncovered), keeping the denominator deterministic.
std::vector<double> context_phonetic_vector(
    std::span<const std::u32string> tokens, const PhoneticFeatureTable& table,
    bool* empty_flag) {
  std::vector<double> mean(table.dimension(), 0.0);
  if (tokens.empty()) {
    *empty_flag = true;
    return mean;
  }
  *empty_flag = false;
  for (const auto& token : tokens) {
    const WordVector wv = word_phonetic_vector(token, table);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += wv.values[i];
  }
  for (double& v : mean) v /= static_cast<double>(tokens.size());
  return mean;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

PhoneticFeatureSet phonetic_features(std::u32string_view word_s,
                                     std::u32string_view word_t,
                                     std::span<const std::u32string> context_s,
                                     std::span<const std::u32string> context_t,
                                     const PhoneticFeatureTable& table) {
  PhoneticFeatureSet out;
  WordVector pv_s = word_phonetic_vector(word_s, table);
  WordVector pv_t = word_phonetic_vector(word_t, table);
  out.word_oov_s = pv_s.oov;
  out.word_oov_t = pv_t.oov;
  out.pv_s = std::move(pv_s.values);
  out.pv_t = std::move(pv_t.values);
  out.pcv_s = context_phonetic_vector(context_s, table, &out.context_empty_s);
  out.pcv_t = context_phonetic_vector(context_t, table, &out.context_empty_t);

  bool deg1 = false, deg2 = false;
  out.score1 = clamp01(cosine_similarity(out.pv_s, out.pv_t, &deg1));
  out.score2 = clamp01(cosine_similarity(out.pcv_s, out.pcv_t, &deg2));
  out.degenerate = deg1 || deg2;

  const auto norm = strsim::normalize_pair(out.score1, out.score2);
  out.p_s1 = norm.s1;
  out.p_s2 = norm.s2;
  return out;
}

}  // namespace cognate::phonology
