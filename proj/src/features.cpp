#include "features.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "error.hpp"
#include "strsim.hpp"
#include "utf8.hpp"

namespace cognate::features {

FeatureSetSpec FeatureSetSpec::parse(std::string_view name) {
  FeatureSetSpec spec;
  std::string component;
  const auto flush = [&](std::string token) {
    if (token.empty()) {
      raise(ErrorCode::InvalidArgument,
            "empty component in feature set '" + std::string(name) + "'");
    }
    std::string upper;
    for (char c : token) upper.push_back(static_cast<char>(std::toupper(
        static_cast<unsigned char>(c))));
    if (upper == "WLS") {
      spec.has_wls = true;
    } else if (upper == "PVS") {
      spec.has_pvs = true;
    } else if (upper == "XL") {
      spec.has_xl = true;
    } else {
      raise(ErrorCode::InvalidArgument,
            "unknown feature component '" + token + "' (expected WLS, PVS, "
            "or XL, joined with '+')");
    }
  };
  for (char c : name) {
    if (c == '+') {
      flush(component);
      component.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      component.push_back(c);
    }
  }
  flush(component);

  if (spec.has_xl) spec.name = "XL";
  if (spec.has_wls) spec.name += spec.name.empty() ? "WLS" : "+WLS";
  if (spec.has_pvs) spec.name += spec.name.empty() ? "PVS" : "+PVS";
  return spec;
}

void Resources::validate(const FeatureSetSpec& spec) const {
  if (spec.has_xl) {
    if (src_embeddings == nullptr || tgt_embeddings == nullptr) {
      raise(ErrorCode::Config,
            "feature set " + spec.name + " needs source and target "
            "embedding tables");
    }
    if (src_embeddings->dimension() != tgt_embeddings->dimension()) {
      raise(ErrorCode::Config,
            "embedding tables disagree on dimension: " +
                std::to_string(src_embeddings->dimension()) + " vs " +
                std::to_string(tgt_embeddings->dimension()));
    }
  }
  if (spec.has_pvs && phonetic_table == nullptr) {
    raise(ErrorCode::Config,
          "feature set " + spec.name + " needs a phonetic feature table");
  }
  if (q_len == 0) {
    raise(ErrorCode::Config, "q_len must be >= 1");
  }
}

std::size_t dimension_for(const FeatureSetSpec& spec, const Resources& res) {
  res.validate(spec);
  std::size_t dim = 0;
  if (spec.has_xl) dim += 4 * res.src_embeddings->dimension() + 2;
  if (spec.has_wls) dim += 2;
  if (spec.has_pvs) dim += 4 * res.phonetic_table->dimension() + 2;
  return dim;
}

std::vector<std::string> feature_names(const FeatureSetSpec& spec,
                                       const Resources& res) {
  res.validate(spec);
  std::vector<std::string> names;
  const auto block = [&names](const std::string& prefix, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(prefix + "_" + std::to_string(i));
    }
  };
  if (spec.has_xl) {
    const std::size_t d = res.src_embeddings->dimension();
    block("wv_s", d);
    block("wv_t", d);
    block("cv_s", d);
    block("cv_t", d);
    names.push_back("xl_s1");
    names.push_back("xl_s2");
  }
  if (spec.has_wls) {
    names.push_back("wls_s1");
    names.push_back("wls_s2");
  }
  if (spec.has_pvs) {
    const std::size_t f = res.phonetic_table->dimension();
    block("pv_s", f);
    block("pv_t", f);
    block("pcv_s", f);
    block("pcv_t", f);
    names.push_back("pvs_s1");
    names.push_back("pvs_s2");
  }
  return names;
}

namespace {

const std::vector<std::string> kNoTokens;

const std::vector<std::string>& context_tokens(
    const context::ContextDictionary* dict, const std::string& word,
    bool* miss) {
  *miss = true;
  if (dict == nullptr) return kNoTokens;
  const auto* tokens = dict->context_of(word);
  if (tokens == nullptr) return kNoTokens;
  *miss = false;
  return *tokens;
}

std::vector<std::u32string> decode_all(
    std::span<const std::string> tokens) {
  std::vector<std::u32string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(utf8::decode(tok));
  return out;
}

void append(std::vector<double>& dst, std::span<const double> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

FeatureVector assemble(const context::WordPair& pair,
                       const FeatureSetSpec& spec, const Resources& res,
                       DatasetStats* stats) {
  res.validate(spec);

  bool miss_s = false, miss_t = false;
  const auto& ctx_s = context_tokens(res.src_context, pair.word_s, &miss_s);
  const auto& ctx_t = context_tokens(res.tgt_context, pair.word_t, &miss_t);

  FeatureVector out;
  out.feature_set = spec.name;
  out.label = pair.label;
  out.pair_id = pair.pair_id;

  bool any_degenerate = false;

  if (spec.has_xl) {
    const auto xl = embeddings::crosslingual_features(
        pair.word_s, pair.word_t, ctx_s, ctx_t, *res.src_embeddings,
        *res.tgt_embeddings, res.skip_oov_context);
    append(out.values, xl.wv_s);
    append(out.values, xl.wv_t);
    append(out.values, xl.cv_s);
    append(out.values, xl.cv_t);
    out.values.push_back(xl.s1);
    out.values.push_back(xl.s2);
    any_degenerate |= xl.degenerate;
    if (stats) {
      stats->embedding_oov_s += xl.oov_word_s ? 1 : 0;
      stats->embedding_oov_t += xl.oov_word_t ? 1 : 0;
    }
  }

  if (spec.has_wls) {
    const std::u32string ws = utf8::decode(pair.word_s);
    const std::u32string wt = utf8::decode(pair.word_t);
    bool deg1 = false, deg2 = false;
    const double score1 = strsim::wls(ws, wt, res.q_len, &deg1);
    const double score2 =
        strsim::wls_context_score(decode_all(ctx_s), decode_all(ctx_t),
                                  res.q_len, res.wls_context_cap, &deg2);
    const auto norm = strsim::normalize_pair(score1, score2);
    out.values.push_back(norm.s1);
    out.values.push_back(norm.s2);
    any_degenerate |= deg1 || deg2;
  }

  if (spec.has_pvs) {
    const auto pvs = phonology::phonetic_features(
        utf8::decode(pair.word_s), utf8::decode(pair.word_t),
        decode_all(ctx_s), decode_all(ctx_t), *res.phonetic_table);
    append(out.values, pvs.pv_s);
    append(out.values, pvs.pv_t);
    append(out.values, pvs.pcv_s);
    append(out.values, pvs.pcv_t);
    out.values.push_back(pvs.p_s1);
    out.values.push_back(pvs.p_s2);
    any_degenerate |= pvs.degenerate;
    if (stats) {
      stats->phonetic_oov_s += pvs.word_oov_s ? 1 : 0;
      stats->phonetic_oov_t += pvs.word_oov_t ? 1 : 0;
    }
  }

  if (stats) {
    ++stats->pair_count;
    (pair.label ? stats->positives : stats->negatives) += 1;
    stats->context_miss_s += miss_s ? 1 : 0;
    stats->context_miss_t += miss_t ? 1 : 0;
    stats->degenerate_scores += any_degenerate ? 1 : 0;
  }
  return out;
}

AssembledDataset assemble_dataset(std::span<const context::WordPair> pairs,
                                  const FeatureSetSpec& spec,
                                  const Resources& res) {
  res.validate(spec);
  AssembledDataset out;
  out.vectors.reserve(pairs.size());
  for (const auto& pair : pairs) {
    out.vectors.push_back(assemble(pair, spec, res, &out.stats));
  }
  return out;
}

void write_csv(const std::filesystem::path& path,
               std::span<const FeatureVector> vectors,
               std::span<const std::string> names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write features: " + path.string());
  out << "pair_id,label";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  char buf[40];
  for (const auto& fv : vectors) {
    out << fv.pair_id << ',' << fv.label;
    for (double v : fv.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace cognate::features
