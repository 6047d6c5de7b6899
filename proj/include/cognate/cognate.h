/* cognate -- cognate detection toolkit for Indic language pairs.
 *
 * C API over the shared library. Handles are opaque; every function returns
 * a cg_status and reports details through cg_last_error(). Strings returned
 * through char** are malloc'd; release them with cg_string_free().
 */
#ifndef COGNATE_COGNATE_H_
#define COGNATE_COGNATE_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cg_status {
  CG_OK = 0,
  CG_ERR_INVALID_ARGUMENT = 1,
  CG_ERR_IO = 2,
  CG_ERR_PARSE = 3,
  CG_ERR_DOMAIN = 4,
  CG_ERR_CONFIG = 5,
  CG_ERR_INTERNAL = 6
} cg_status;

const char* cg_status_name(cg_status status);

/* Message for the calling thread's most recent failure; empty string after
 * a successful call. The pointer stays valid until the next API call on the
 * same thread. */
const char* cg_last_error(void);

const char* cg_version(void);

void cg_string_free(char* s);

/* ---- script transliteration -------------------------------------------- */

/* Script block holding the plurality of Brahmic codepoints, or "unknown". */
cg_status cg_detect_script(const char* utf8_text, char** script_out);

/* Offset-maps the nine Brahmic blocks onto Devanagari; everything else
 * passes through and is counted in *passthrough_out (nullable). */
cg_status cg_to_devanagari(const char* utf8_text, char** text_out,
                           size_t* passthrough_out);

/* ---- string similarity -------------------------------------------------- */

cg_status cg_levenshtein(const char* a, const char* b, size_t* out);
cg_status cg_ned_similarity(const char* a, const char* b, double* out);
cg_status cg_qgram_distance(const char* a, const char* b, size_t q,
                            size_t* out);
cg_status cg_qgram_similarity(const char* a, const char* b, size_t q,
                              double* out);
/* 0.75 * ned_similarity + 0.25 * qgram_similarity */
cg_status cg_wls(const char* a, const char* b, size_t q, double* out);
/* s1 = score1/(score1+score2), s2 likewise; (0,0) maps to (0.5, 0.5).
 * Negative or non-finite scores fail with CG_ERR_DOMAIN. */
cg_status cg_normalize_pair(double score1, double score2, double* s1_out,
                            double* s2_out);

/* ---- phonetic feature vectors ------------------------------------------ */

typedef struct cg_phonetic_table cg_phonetic_table;

/* NULL path opens the built-in Devanagari table (38 features). */
cg_status cg_phonetic_table_open(const char* csv_path,
                                 cg_phonetic_table** out);
void cg_phonetic_table_close(cg_phonetic_table* table);
cg_status cg_phonetic_table_dimension(const cg_phonetic_table* table,
                                      size_t* out);
/* buffer_len must equal the table dimension. *oov_out (nullable) is set when
 * no character of the word is covered (vector is then all zeros). */
cg_status cg_word_phonetic_vector(const cg_phonetic_table* table,
                                  const char* word, double* buffer,
                                  size_t buffer_len, int* oov_out);

/* ---- cross-lingual embeddings ------------------------------------------ */

typedef struct cg_embeddings cg_embeddings;

/* word2vec text format. `tag` labels the alignment method (may be NULL). */
cg_status cg_embeddings_open(const char* path, const char* language,
                             const char* tag, cg_embeddings** out);
void cg_embeddings_close(cg_embeddings* table);
cg_status cg_embeddings_dimension(const cg_embeddings* table, size_t* out);
cg_status cg_embeddings_size(const cg_embeddings* table, size_t* out);
/* Rows dropped at load time because their word was already present. */
cg_status cg_embeddings_duplicates(const cg_embeddings* table, size_t* out);
/* Absent words yield the zero vector and *oov_out = 1; never fails on a
 * missing word. buffer_len must equal the dimension. */
cg_status cg_embeddings_lookup(const cg_embeddings* table, const char* word,
                               double* buffer, size_t buffer_len,
                               int* oov_out);

/* 1 - arccos(cosine)/pi in [0,1]; zero vectors yield 0 with
 * *degenerate_out = 1 (nullable). */
cg_status cg_angular_similarity(const double* u, const double* v, size_t n,
                                double* out, int* degenerate_out);

/* ---- context dictionaries ---------------------------------------------- */

typedef struct cg_context_dict cg_context_dict;

/* wordnet_tsv rows: word TAB gloss TAB example1 | example2 | ...
 * stopwords (nullable): one token per line. */
cg_status cg_context_dict_build(const char* wordnet_tsv, const char* stopwords,
                                const char* language, cg_context_dict** out);
void cg_context_dict_close(cg_context_dict* dict);
/* Writes `word TAB token token ...` lines (re-loadable through build). */
cg_status cg_context_dict_save(const cg_context_dict* dict, const char* path);
cg_status cg_context_dict_stats(const cg_context_dict* dict, char** json_out);
/* *tokens_json_out is a JSON array of tokens (empty array when the entry is
 * empty or missing); *miss_out distinguishes a missing entry. */
cg_status cg_context_of(const cg_context_dict* dict, const char* word,
                        char** tokens_json_out, int* miss_out);

/* ---- classifier models -------------------------------------------------- */

typedef struct cg_model cg_model;

cg_status cg_model_open(const char* path, cg_model** out);
void cg_model_close(cg_model* model);
cg_status cg_model_input_dim(const cg_model* model, size_t* out);
/* label = 1 iff probability >= 0.5 */
cg_status cg_model_predict(const cg_model* model, const double* x, size_t n,
                           int* label_out, double* probability_out);

/* ---- experiments -------------------------------------------------------- */

/* Executes a RunConfig JSON (commands: evaluate, ablate, predict) and
 * returns the result JSON; see the README for the key reference. */
cg_status cg_run(const char* run_config_json, char** result_json_out);

/* reports_json: JSON array of report objects (the "reports" value returned
 * by cg_run). format: "json", "csv", or "markdown". */
cg_status cg_render_reports(const char* reports_json, const char* format,
                            char** out);

/* ---- corpus augmentation ------------------------------------------------ */

/* Appends pairs from pairs_tsv (dataset TSV format) to the aligned corpus as
 * single-word sentence pairs. With positive_only, rows labeled 0 are ignored;
 * lang_pair (nullable) restricts rows to one language pair. stats_json_out is
 * nullable. */
cg_status cg_inject_cognates_files(const char* src_in, const char* tgt_in,
                                   const char* pairs_tsv,
                                   const char* lang_pair, int positive_only,
                                   const char* src_out, const char* tgt_out,
                                   size_t* appended_out,
                                   char** stats_json_out);

/* ---- byte-pair encoding -------------------------------------------------- */

typedef struct cg_bpe cg_bpe;

cg_status cg_bpe_learn_file(const char* corpus_path, size_t merge_count,
                            cg_bpe** out);
cg_status cg_bpe_open(const char* merges_path, cg_bpe** out);
void cg_bpe_close(cg_bpe* model);
cg_status cg_bpe_save(const cg_bpe* model, const char* path);
cg_status cg_bpe_merge_count(const cg_bpe* model, size_t* out);
/* Segments each whitespace token; non-final subwords carry the "@@ " joiner. */
cg_status cg_bpe_apply_line(const cg_bpe* model, const char* line, char** out);
cg_status cg_bpe_apply_file(const cg_bpe* model, const char* in_path,
                            const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COGNATE_COGNATE_H_ */
