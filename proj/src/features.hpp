#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "context.hpp"
#include "embeddings.hpp"
#include "phonology.hpp"

namespace cognate::features {

// A feature set is a '+'-combination of the three families. Assembly order
// is frozen as XL, WLS, PVS regardless of how the name spells it:
//   WLS     -> [S1, S2]                                   (2)
//   PVS     -> [PV_S | PV_T | PCV_S | PCV_T | P_S1, P_S2] (4F + 2)
//   XL      -> [WV_S | WV_T | CV_S | CV_T | s1, s2]       (4d + 2)
//   XL+WLS  -> XL order, then [S1, S2]                    (4d + 4)
struct FeatureSetSpec {
  std::string name;  // canonical spelling, e.g. "XL+WLS"
  bool has_xl = false;
  bool has_wls = false;
  bool has_pvs = false;

  static FeatureSetSpec parse(std::string_view name);
};

struct Resources {
  const embeddings::EmbeddingTable* src_embeddings = nullptr;
  const embeddings::EmbeddingTable* tgt_embeddings = nullptr;
  const phonology::PhoneticFeatureTable* phonetic_table = nullptr;
  const context::ContextDictionary* src_context = nullptr;  // null -> empty
  const context::ContextDictionary* tgt_context = nullptr;
  std::size_t q_len = 2;
  std::size_t wls_context_cap = 50;  // most-frequent-token cap per side
  bool skip_oov_context = false;

  // Raises Config unless every resource the set needs is present.
  void validate(const FeatureSetSpec& spec) const;
};

struct FeatureVector {
  std::string feature_set;
  std::vector<double> values;
  int label = 0;
  std::string pair_id;
};

struct DatasetStats {
  std::size_t pair_count = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t embedding_oov_s = 0;  // word-level lookups that missed
  std::size_t embedding_oov_t = 0;
  std::size_t phonetic_oov_s = 0;
  std::size_t phonetic_oov_t = 0;
  std::size_t context_miss_s = 0;  // pairs whose word has no context entry
  std::size_t context_miss_t = 0;
  std::size_t degenerate_scores = 0;  // pairs with any degenerate similarity
};

std::size_t dimension_for(const FeatureSetSpec& spec, const Resources& res);
std::vector<std::string> feature_names(const FeatureSetSpec& spec,
                                       const Resources& res);

FeatureVector assemble(const context::WordPair& pair,
                       const FeatureSetSpec& spec, const Resources& res,
                       DatasetStats* stats = nullptr);

struct AssembledDataset {
  std::vector<FeatureVector> vectors;
  DatasetStats stats;
};

AssembledDataset assemble_dataset(std::span<const context::WordPair> pairs,
                                  const FeatureSetSpec& spec,
                                  const Resources& res);

// Header row of feature names, then one CSV row per vector (pair_id, label,
// values at full precision).
void write_csv(const std::filesystem::path& path,
               std::span<const FeatureVector> vectors,
               std::span<const std::string> names);

}  // namespace cognate::features
