#include "embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "error.hpp"
#include "strsim.hpp"

namespace cognate::embeddings {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double* out) {
  try {
    std::size_t used = 0;
    const std::string tmp(s);
    *out = std::stod(tmp, &used);
    return used == tmp.size() && std::isfinite(*out);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path,
                                    std::string language,
                                    std::string source_tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open embeddings: " + path.string());

  EmbeddingTable table;
  table.language_ = std::move(language);
  table.source_tag_ = std::move(source_tag);

  const std::string origin = path.string();
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    raise(ErrorCode::Parse, origin + ":1: missing header line");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto fields = split_spaces(line);
    unsigned long long vocab = 0, dim = 0;
    const auto parse_count = [](std::string_view s,
                                unsigned long long* value) {
      try {
        std::size_t used = 0;
        const std::string tmp(s);
        *value = std::stoull(tmp, &used);
        return used == tmp.size();
      } catch (const std::exception&) {
        return false;
      }
    };
    if (fields.size() != 2 || !parse_count(fields[0], &vocab) ||
        !parse_count(fields[1], &dim) || dim == 0) {
      raise(ErrorCode::Parse,
            origin + ":1: malformed header, expected '<count> <dimension>'");
    }
    table.dimension_ = static_cast<std::size_t>(dim);
    table.storage_.reserve(static_cast<std::size_t>(vocab) *
                           table.dimension_);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_spaces(line);
    const std::string where = origin + ":" + std::to_string(line_no);
    if (fields.size() != table.dimension_ + 1) {
      raise(ErrorCode::Parse,
            where + ": expected word + " + std::to_string(table.dimension_) +
                " components, got " + std::to_string(fields.size()) +
                " fields");
    }
    const std::string word(fields[0]);
    if (table.index_.count(word)) {
      ++table.duplicate_count_;
      continue;  // keep the first occurrence
    }
    const std::size_t row = table.storage_.size();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], &v)) {
        table.storage_.resize(row);
        raise(ErrorCode::Parse, where + ": non-numeric component '" +
                                    std::string(fields[i]) + "'");
      }
      table.storage_.push_back(v);
    }
    table.index_.emplace(word, row);
  }
  table.zero_.assign(table.dimension_, 0.0);
  return table;
}

EmbeddingTable::Lookup EmbeddingTable::lookup(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) {
    return {std::span<const double>(zero_.data(), dimension_), true};
  }
  return {std::span<const double>(storage_.data() + it->second, dimension_),
          false};
}

double angular_similarity(std::span<const double> u, std::span<const double> v,
                          bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (u.size() != v.size()) {
    raise(ErrorCode::InvalidArgument, "angular_similarity: dimension mismatch");
  }
  double nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  // arccos(u.v / |u||v|) evaluated as 2 atan2(|a-b|, |a+b|) on the unit
  // vectors a, b: identical conditioning everywhere, exact at both poles
  // (plain arccos loses ~1e-8 next to cosine 1).
  const double inv_nu = 1.0 / std::sqrt(nu);
  const double inv_nv = 1.0 / std::sqrt(nv);
  double diff2 = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] * inv_nu;
    const double b = v[i] * inv_nv;
    diff2 += (a - b) * (a - b);
    sum2 += (a + b) * (a + b);
  }
  const double angle = 2.0 * std::atan2(std::sqrt(diff2), std::sqrt(sum2));
  return 1.0 - angle / 3.14159265358979323846;
}

namespace {

std::vector<double> context_vector(std::span<const std::string> tokens,
                                   const EmbeddingTable& table,
                                   bool skip_oov, std::size_t* oov_count,
                                   bool* empty_flag) {
  std::vector<double> mean(table.dimension(), 0.0);
  *oov_count = 0;
  if (tokens.empty()) {
    *empty_flag = true;
    return mean;
  }
  *empty_flag = false;
  std::size_t denom = 0;
  for (const auto& token : tokens) {
    const auto hit = table.lookup(token);
    if (hit.oov) {
      ++*oov_count;
      if (skip_oov) continue;
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += hit.values[i];
    ++denom;
  }
  if (denom == 0) {
    *empty_flag = true;
    return mean;
  }
  for (double& v : mean) v /= static_cast<double>(denom);
  return mean;
}

}  // namespace

CrossLingualFeatureSet crosslingual_features(
    std::string_view word_s, std::string_view word_t,
    std::span<const std::string> context_s,
    std::span<const std::string> context_t, const EmbeddingTable& src,
    const EmbeddingTable& tgt, bool skip_oov_context) {
  if (src.dimension() != tgt.dimension()) {
    raise(ErrorCode::InvalidArgument,
          "embedding tables disagree on dimension: " +
              std::to_string(src.dimension()) + " vs " +
              std::to_string(tgt.dimension()));
  }
  CrossLingualFeatureSet out;
  const auto s_hit = src.lookup(word_s);
  const auto t_hit = tgt.lookup(word_t);
  out.oov_word_s = s_hit.oov;
  out.oov_word_t = t_hit.oov;
  out.wv_s.assign(s_hit.values.begin(), s_hit.values.end());
  out.wv_t.assign(t_hit.values.begin(), t_hit.values.end());
  out.cv_s = context_vector(context_s, src, skip_oov_context,
                            &out.oov_context_s, &out.context_empty_s);
  out.cv_t = context_vector(context_t, tgt, skip_oov_context,
                            &out.oov_context_t, &out.context_empty_t);

  bool deg1 = false, deg2 = false;
  out.score1 = angular_similarity(out.wv_s, out.wv_t, &deg1);
  out.score2 = angular_similarity(out.cv_s, out.cv_t, &deg2);
  out.degenerate = deg1 || deg2;

  const auto norm = strsim::normalize_pair(out.score1, out.score2);
  out.s1 = norm.s1;
  out.s2 = norm.s2;
  return out;
}

}  // namespace cognate::embeddings
