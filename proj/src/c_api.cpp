#include "cognate/cognate.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "augment.hpp"
#include "classifier.hpp"
#include "context.hpp"
#include "embeddings.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "phonology.hpp"
#include "script.hpp"
#include "strsim.hpp"
#include "utf8.hpp"

namespace {

thread_local std::string g_last_error;

cg_status status_of(cognate::ErrorCode code) {
  using cognate::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return CG_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io:
      return CG_ERR_IO;
    case ErrorCode::Parse:
      return CG_ERR_PARSE;
    case ErrorCode::Domain:
      return CG_ERR_DOMAIN;
    case ErrorCode::Config:
      return CG_ERR_CONFIG;
    case ErrorCode::Internal:
      return CG_ERR_INTERNAL;
  }
  return CG_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes + cg_last_error.
template <typename Fn>
cg_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CG_OK;
  } catch (const cognate::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CG_ERR_INTERNAL;
  }
}

cg_status fail_null_argument() {
  g_last_error = "null argument";
  return CG_ERR_INVALID_ARGUMENT;
}

char* dup_string(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

}  // namespace

struct cg_phonetic_table {
  cognate::phonology::PhoneticFeatureTable table;
};
struct cg_embeddings {
  cognate::embeddings::EmbeddingTable table;
};
struct cg_context_dict {
  cognate::context::ContextDictionary dict;
};
struct cg_model {
  cognate::classifier::FFNNModel model;
};
struct cg_bpe {
  cognate::augment::BpeModel model;
};

extern "C" {

const char* cg_status_name(cg_status status) {
  switch (status) {
    case CG_OK:
      return "ok";
    case CG_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case CG_ERR_IO:
      return "io";
    case CG_ERR_PARSE:
      return "parse";
    case CG_ERR_DOMAIN:
      return "domain";
    case CG_ERR_CONFIG:
      return "config";
    case CG_ERR_INTERNAL:
      return "internal";
  }
  return "?";
}

const char* cg_last_error(void) { return g_last_error.c_str(); }

const char* cg_version(void) { return "0.1.0"; }

void cg_string_free(char* s) { std::free(s); }

cg_status cg_detect_script(const char* utf8_text, char** script_out) {
  if (!utf8_text || !script_out) return fail_null_argument();
  return guarded([&] {
    *script_out = dup_string(cognate::script::detect_script(utf8_text));
  });
}

cg_status cg_to_devanagari(const char* utf8_text, char** text_out,
                           size_t* passthrough_out) {
  if (!utf8_text || !text_out) return fail_null_argument();
  return guarded([&] {
    auto result = cognate::script::to_devanagari(utf8_text);
    *text_out = dup_string(result.text);
    if (passthrough_out) *passthrough_out = result.passthrough_count;
  });
}

cg_status cg_levenshtein(const char* a, const char* b, size_t* out) {
  if (!a || !b || !out) return fail_null_argument();
  return guarded([&] { *out = cognate::strsim::levenshtein_utf8(a, b); });
}

cg_status cg_ned_similarity(const char* a, const char* b, double* out) {
  if (!a || !b || !out) return fail_null_argument();
  return guarded([&] {
    *out = cognate::strsim::ned_similarity(cognate::utf8::decode(a),
                                           cognate::utf8::decode(b));
  });
}

cg_status cg_qgram_distance(const char* a, const char* b, size_t q,
                            size_t* out) {
  if (!a || !b || !out) return fail_null_argument();
  return guarded([&] {
    *out = cognate::strsim::qgram_distance(cognate::utf8::decode(a),
                                           cognate::utf8::decode(b), q);
  });
}

cg_status cg_qgram_similarity(const char* a, const char* b, size_t q,
                              double* out) {
  if (!a || !b || !out) return fail_null_argument();
  return guarded([&] {
    *out = cognate::strsim::qgram_similarity(cognate::utf8::decode(a),
                                             cognate::utf8::decode(b), q);
  });
}

cg_status cg_wls(const char* a, const char* b, size_t q, double* out) {
  if (!a || !b || !out) return fail_null_argument();
  return guarded([&] { *out = cognate::strsim::wls_utf8(a, b, q); });
}

cg_status cg_normalize_pair(double score1, double score2, double* s1_out,
                            double* s2_out) {
  if (!s1_out || !s2_out) return fail_null_argument();
  return guarded([&] {
    const auto pair = cognate::strsim::normalize_pair(score1, score2);
    *s1_out = pair.s1;
    *s2_out = pair.s2;
  });
}

cg_status cg_phonetic_table_open(const char* csv_path,
                                 cg_phonetic_table** out) {
  if (!out) return fail_null_argument();
  return guarded([&] {
    using cognate::phonology::PhoneticFeatureTable;
    *out = new cg_phonetic_table{
        csv_path == nullptr ? PhoneticFeatureTable::builtin()
                            : PhoneticFeatureTable::load_csv(csv_path)};
  });
}

void cg_phonetic_table_close(cg_phonetic_table* table) { delete table; }

cg_status cg_phonetic_table_dimension(const cg_phonetic_table* table,
                                      size_t* out) {
  if (!table || !out) return fail_null_argument();
  return guarded([&] { *out = table->table.dimension(); });
}

cg_status cg_word_phonetic_vector(const cg_phonetic_table* table,
                                  const char* word, double* buffer,
                                  size_t buffer_len, int* oov_out) {
  if (!table || !word || !buffer) return fail_null_argument();
  return guarded([&] {
    if (buffer_len != table->table.dimension()) {
      cognate::raise(cognate::ErrorCode::InvalidArgument,
                     "buffer length must equal the table dimension");
    }
    const auto vec =
        cognate::phonology::word_phonetic_vector_utf8(word, table->table);
    std::memcpy(buffer, vec.values.data(), buffer_len * sizeof(double));
    if (oov_out) *oov_out = vec.oov ? 1 : 0;
  });
}

cg_status cg_embeddings_open(const char* path, const char* language,
                             const char* tag, cg_embeddings** out) {
  if (!path || !language || !out) return fail_null_argument();
  return guarded([&] {
    *out = new cg_embeddings{cognate::embeddings::EmbeddingTable::load(
        path, language, tag ? tag : "")};
  });
}

void cg_embeddings_close(cg_embeddings* table) { delete table; }

cg_status cg_embeddings_dimension(const cg_embeddings* table, size_t* out) {
  if (!table || !out) return fail_null_argument();
  return guarded([&] { *out = table->table.dimension(); });
}

cg_status cg_embeddings_size(const cg_embeddings* table, size_t* out) {
  if (!table || !out) return fail_null_argument();
  return guarded([&] { *out = table->table.size(); });
}

cg_status cg_embeddings_duplicates(const cg_embeddings* table, size_t* out) {
  if (!table || !out) return fail_null_argument();
  return guarded([&] { *out = table->table.duplicate_count(); });
}

cg_status cg_embeddings_lookup(const cg_embeddings* table, const char* word,
                               double* buffer, size_t buffer_len,
                               int* oov_out) {
  if (!table || !word || !buffer) return fail_null_argument();
  return guarded([&] {
    if (buffer_len != table->table.dimension()) {
      cognate::raise(cognate::ErrorCode::InvalidArgument,
                     "buffer length must equal the embedding dimension");
    }
    const auto hit = table->table.lookup(word);
    std::memcpy(buffer, hit.values.data(), buffer_len * sizeof(double));
    if (oov_out) *oov_out = hit.oov ? 1 : 0;
  });
}

cg_status cg_angular_similarity(const double* u, const double* v, size_t n,
                                double* out, int* degenerate_out) {
  if (!u || !v || !out) return fail_null_argument();
  return guarded([&] {
    bool degenerate = false;
    *out = cognate::embeddings::angular_similarity({u, n}, {v, n},
                                                   &degenerate);
    if (degenerate_out) *degenerate_out = degenerate ? 1 : 0;
  });
}

cg_status cg_context_dict_build(const char* wordnet_tsv, const char* stopwords,
                                const char* language, cg_context_dict** out) {
  if (!wordnet_tsv || !language || !out) return fail_null_argument();
  return guarded([&] {
    std::optional<std::filesystem::path> stop;
    if (stopwords) stop = stopwords;
    *out = new cg_context_dict{cognate::context::ContextDictionary::build(
        wordnet_tsv, stop ? &*stop : nullptr, language)};
  });
}

void cg_context_dict_close(cg_context_dict* dict) { delete dict; }

cg_status cg_context_dict_save(const cg_context_dict* dict, const char* path) {
  if (!dict || !path) return fail_null_argument();
  return guarded([&] { dict->dict.save(path); });
}

cg_status cg_context_dict_stats(const cg_context_dict* dict, char** json_out) {
  if (!dict || !json_out) return fail_null_argument();
  return guarded([&] {
    const nlohmann::json j = {
        {"language", dict->dict.language()},
        {"entries", dict->dict.size()},
        {"tokens", dict->dict.token_count()},
        {"skipped_records", dict->dict.skipped_records()},
        {"stopwords_applied", dict->dict.stopwords_applied()}};
    *json_out = dup_string(j.dump());
  });
}

cg_status cg_context_of(const cg_context_dict* dict, const char* word,
                        char** tokens_json_out, int* miss_out) {
  if (!dict || !word || !tokens_json_out) return fail_null_argument();
  return guarded([&] {
    const auto* tokens = dict->dict.context_of(word);
    nlohmann::json j = nlohmann::json::array();
    if (tokens) {
      for (const auto& t : *tokens) j.push_back(t);
    }
    *tokens_json_out = dup_string(j.dump());
    if (miss_out) *miss_out = tokens == nullptr ? 1 : 0;
  });
}

cg_status cg_model_open(const char* path, cg_model** out) {
  if (!path || !out) return fail_null_argument();
  return guarded(
      [&] { *out = new cg_model{cognate::classifier::load_model(path)}; });
}

void cg_model_close(cg_model* model) { delete model; }

cg_status cg_model_input_dim(const cg_model* model, size_t* out) {
  if (!model || !out) return fail_null_argument();
  return guarded(
      [&] { *out = static_cast<size_t>(model->model.input_dim); });
}

cg_status cg_model_predict(const cg_model* model, const double* x, size_t n,
                           int* label_out, double* probability_out) {
  if (!model || !x) return fail_null_argument();
  return guarded([&] {
    const auto pred = cognate::classifier::predict(model->model, {x, n});
    if (label_out) *label_out = pred.label;
    if (probability_out) *probability_out = pred.probability;
  });
}

cg_status cg_run(const char* run_config_json, char** result_json_out) {
  if (!run_config_json || !result_json_out) return fail_null_argument();
  return guarded([&] {
    *result_json_out =
        dup_string(cognate::engine::run_json(run_config_json).dump(2));
  });
}

cg_status cg_render_reports(const char* reports_json, const char* format,
                            char** out) {
  if (!reports_json || !format || !out) return fail_null_argument();
  return guarded([&] {
    nlohmann::json reports;
    try {
      reports = nlohmann::json::parse(reports_json);
    } catch (const nlohmann::json::exception& e) {
      cognate::raise(cognate::ErrorCode::Parse,
                     std::string("reports JSON: ") + e.what());
    }
    if (!reports.is_array()) {
      cognate::raise(cognate::ErrorCode::InvalidArgument,
                     "reports must be a JSON array");
    }
    const std::vector<nlohmann::json> list(reports.begin(), reports.end());
    *out = dup_string(cognate::evaluation::render_reports(list, format));
  });
}

cg_status cg_inject_cognates_files(const char* src_in, const char* tgt_in,
                                   const char* pairs_tsv,
                                   const char* lang_pair, int positive_only,
                                   const char* src_out, const char* tgt_out,
                                   size_t* appended_out,
                                   char** stats_json_out) {
  if (!src_in || !tgt_in || !pairs_tsv || !src_out || !tgt_out) {
    return fail_null_argument();
  }
  return guarded([&] {
    auto corpus = cognate::augment::load_parallel(src_in, tgt_in);
    const auto data = cognate::context::load_dataset(
        pairs_tsv, std::nullopt, /*require_label=*/false);
    std::vector<cognate::context::WordPair> cognates;
    for (const auto& pair : data.pairs) {
      if (positive_only && pair.label != 1) continue;
      cognates.push_back(pair);
    }
    std::optional<std::string> expected;
    if (lang_pair) expected = lang_pair;
    const auto stats =
        cognate::augment::inject_cognates(corpus, cognates, expected);
    cognate::augment::save_parallel(corpus, src_out, tgt_out);
    if (appended_out) *appended_out = stats.appended;
    if (stats_json_out) {
      const nlohmann::json j = {
          {"appended", stats.appended},
          {"skipped_empty", stats.skipped_empty},
          {"skipped_lang_pair", stats.skipped_lang_pair},
          {"corpus_lines", corpus.src_lines.size()}};
      *stats_json_out = dup_string(j.dump());
    }
  });
}

cg_status cg_bpe_learn_file(const char* corpus_path, size_t merge_count,
                            cg_bpe** out) {
  if (!corpus_path || !out) return fail_null_argument();
  return guarded([&] {
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) {
      cognate::raise(cognate::ErrorCode::Io,
                     std::string("cannot open corpus: ") + corpus_path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
    *out = new cg_bpe{cognate::augment::BpeModel::learn(lines, merge_count)};
  });
}

cg_status cg_bpe_open(const char* merges_path, cg_bpe** out) {
  if (!merges_path || !out) return fail_null_argument();
  return guarded(
      [&] { *out = new cg_bpe{cognate::augment::BpeModel::load(merges_path)}; });
}

void cg_bpe_close(cg_bpe* model) { delete model; }

cg_status cg_bpe_save(const cg_bpe* model, const char* path) {
  if (!model || !path) return fail_null_argument();
  return guarded([&] { model->model.save(path); });
}

cg_status cg_bpe_merge_count(const cg_bpe* model, size_t* out) {
  if (!model || !out) return fail_null_argument();
  return guarded([&] { *out = model->model.merges().size(); });
}

cg_status cg_bpe_apply_line(const cg_bpe* model, const char* line,
                            char** out) {
  if (!model || !line || !out) return fail_null_argument();
  return guarded([&] { *out = dup_string(model->model.apply_line(line)); });
}

cg_status cg_bpe_apply_file(const cg_bpe* model, const char* in_path,
                            const char* out_path) {
  if (!model || !in_path || !out_path) return fail_null_argument();
  return guarded([&] {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) {
      cognate::raise(cognate::ErrorCode::Io,
                     std::string("cannot open corpus: ") + in_path);
    }
    std::ofstream out_file(out_path, std::ios::binary);
    if (!out_file) {
      cognate::raise(cognate::ErrorCode::Io,
                     std::string("cannot write: ") + out_path);
    }
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      out_file << model->model.apply_line(line) << '\n';
    }
  });
}

}  // extern "C"
