#include "engine.hpp"

#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "context.hpp"
#include "embeddings.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "features.hpp"
#include "phonology.hpp"

namespace cognate::engine {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string dataset;
  std::optional<std::string> lang_pair;
  std::vector<std::string> feature_sets;
  std::string emb_src, emb_tgt, emb_tag;
  std::string src_lang, tgt_lang;
  std::string phonetic_table;  // empty selects the built-in table
  std::string context_src, context_tgt;
  std::string stopwords_src, stopwords_tgt;
  std::size_t q_len = 2;
  std::size_t context_cap = 50;
  bool skip_oov_context = false;
  int k = 5;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0 -> hardware concurrency
  std::vector<int> grid_hidden = {30, 50, 100, 150};
  std::vector<std::string> grid_activations = {"tanh", "hardtanh", "sigmoid",
                                               "relu"};
  double initial_lr = 0.4;
  double lr_floor = 0.001;
  int batch_size = 64;
  int max_epochs = 500;
  std::string save_model;
  std::string model;
  std::string dump_features;

  json expanded;  // config with defaults filled in, for provenance
};

template <typename T>
void read_key(const json& j, const char* key, T* out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) {
    try {
      *out = it->get<T>();
    } catch (const json::exception&) {
      raise(ErrorCode::Parse,
            std::string("run config: bad value for '") + key + "'");
    }
  }
}

void read_key(const json& j, const char* key,
              std::optional<std::string>* out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) {
    *out = it->get<std::string>();
  }
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) {
    raise(ErrorCode::Parse, "run config must be a JSON object");
  }
  static const std::vector<std::string> known = {
      "command",      "dataset",       "lang_pair",     "feature_sets",
      "emb_src",      "emb_tgt",       "emb_tag",       "src_lang",
      "tgt_lang",     "phonetic_table", "context_src",  "context_tgt",
      "stopwords_src", "stopwords_tgt", "q_len",        "context_cap",
      "skip_oov_context", "k",         "seed",          "threads",
      "grid_hidden",  "grid_activations", "initial_lr", "lr_floor",
      "batch_size",   "max_epochs",    "save_model",    "model",
      "dump_features", "format",       "out"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      raise(ErrorCode::Parse, "run config: unknown key '" + key + "'");
    }
  }

  RunConfig cfg;
  read_key(j, "command", &cfg.command);
  read_key(j, "dataset", &cfg.dataset);
  read_key(j, "lang_pair", &cfg.lang_pair);
  read_key(j, "feature_sets", &cfg.feature_sets);
  read_key(j, "emb_src", &cfg.emb_src);
  read_key(j, "emb_tgt", &cfg.emb_tgt);
  read_key(j, "emb_tag", &cfg.emb_tag);
  read_key(j, "src_lang", &cfg.src_lang);
  read_key(j, "tgt_lang", &cfg.tgt_lang);
  read_key(j, "phonetic_table", &cfg.phonetic_table);
  read_key(j, "context_src", &cfg.context_src);
  read_key(j, "context_tgt", &cfg.context_tgt);
  read_key(j, "stopwords_src", &cfg.stopwords_src);
  read_key(j, "stopwords_tgt", &cfg.stopwords_tgt);
  read_key(j, "q_len", &cfg.q_len);
  read_key(j, "context_cap", &cfg.context_cap);
  read_key(j, "skip_oov_context", &cfg.skip_oov_context);
  read_key(j, "k", &cfg.k);
  read_key(j, "seed", &cfg.seed);
  read_key(j, "threads", &cfg.threads);
  read_key(j, "grid_hidden", &cfg.grid_hidden);
  read_key(j, "grid_activations", &cfg.grid_activations);
  read_key(j, "initial_lr", &cfg.initial_lr);
  read_key(j, "lr_floor", &cfg.lr_floor);
  read_key(j, "batch_size", &cfg.batch_size);
  read_key(j, "max_epochs", &cfg.max_epochs);
  read_key(j, "save_model", &cfg.save_model);
  read_key(j, "model", &cfg.model);
  read_key(j, "dump_features", &cfg.dump_features);

  if (cfg.src_lang.empty() || cfg.tgt_lang.empty()) {
    if (cfg.lang_pair) {
      const auto dash = cfg.lang_pair->find('-');
      if (dash != std::string::npos) {
        if (cfg.src_lang.empty()) cfg.src_lang = cfg.lang_pair->substr(0, dash);
        if (cfg.tgt_lang.empty()) cfg.tgt_lang = cfg.lang_pair->substr(dash + 1);
      }
    }
    if (cfg.src_lang.empty()) cfg.src_lang = "src";
    if (cfg.tgt_lang.empty()) cfg.tgt_lang = "tgt";
  }

  cfg.expanded = {{"command", cfg.command},
                  {"dataset", cfg.dataset},
                  {"feature_sets", cfg.feature_sets},
                  {"q_len", cfg.q_len},
                  {"context_cap", cfg.context_cap},
                  {"skip_oov_context", cfg.skip_oov_context},
                  {"k", cfg.k},
                  {"seed", cfg.seed},
                  {"grid_hidden", cfg.grid_hidden},
                  {"grid_activations", cfg.grid_activations},
                  {"initial_lr", cfg.initial_lr},
                  {"lr_floor", cfg.lr_floor},
                  {"batch_size", cfg.batch_size},
                  {"max_epochs", cfg.max_epochs}};
  if (cfg.lang_pair) cfg.expanded["lang_pair"] = *cfg.lang_pair;
  const auto put_if = [&cfg](const char* key, const std::string& value) {
    if (!value.empty()) cfg.expanded[key] = value;
  };
  put_if("emb_src", cfg.emb_src);
  put_if("emb_tgt", cfg.emb_tgt);
  put_if("emb_tag", cfg.emb_tag);
  put_if("phonetic_table", cfg.phonetic_table);
  put_if("context_src", cfg.context_src);
  put_if("context_tgt", cfg.context_tgt);
  put_if("stopwords_src", cfg.stopwords_src);
  put_if("stopwords_tgt", cfg.stopwords_tgt);
  put_if("save_model", cfg.save_model);
  put_if("model", cfg.model);
  put_if("dump_features", cfg.dump_features);
  return cfg;
}

struct LoadedResources {
  std::optional<embeddings::EmbeddingTable> src_emb, tgt_emb;
  std::optional<phonology::PhoneticFeatureTable> phon_file;
  std::optional<context::ContextDictionary> src_ctx, tgt_ctx;
  features::Resources view;
  json provenance_files = json::object();
};

void note_file(LoadedResources& loaded, const char* key,
               const std::string& path) {
  loaded.provenance_files[key] = {{"path", path},
                                  {"fnv1a64", evaluation::file_digest(path)}};
}

LoadedResources load_resources(
    const RunConfig& cfg, std::span<const features::FeatureSetSpec> specs) {
  bool need_xl = false, need_pvs = false;
  for (const auto& spec : specs) {
    need_xl |= spec.has_xl;
    need_pvs |= spec.has_pvs;
  }

  LoadedResources loaded;
  loaded.view.q_len = cfg.q_len;
  loaded.view.wls_context_cap = cfg.context_cap;
  loaded.view.skip_oov_context = cfg.skip_oov_context;

  if (need_xl) {
    if (cfg.emb_src.empty() || cfg.emb_tgt.empty()) {
      raise(ErrorCode::Config,
            "cross-lingual feature sets need emb_src and emb_tgt");
    }
    loaded.src_emb =
        embeddings::EmbeddingTable::load(cfg.emb_src, cfg.src_lang,
                                         cfg.emb_tag);
    loaded.tgt_emb =
        embeddings::EmbeddingTable::load(cfg.emb_tgt, cfg.tgt_lang,
                                         cfg.emb_tag);
    loaded.view.src_embeddings = &*loaded.src_emb;
    loaded.view.tgt_embeddings = &*loaded.tgt_emb;
    note_file(loaded, "emb_src", cfg.emb_src);
    note_file(loaded, "emb_tgt", cfg.emb_tgt);
    const auto describe = [](const embeddings::EmbeddingTable& table) {
      return json{{"entries", table.size()},
                  {"dimension", table.dimension()},
                  {"duplicates_dropped", table.duplicate_count()}};
    };
    loaded.provenance_files["emb_src"]["table"] = describe(*loaded.src_emb);
    loaded.provenance_files["emb_tgt"]["table"] = describe(*loaded.tgt_emb);
  }
  if (need_pvs) {
    if (cfg.phonetic_table.empty()) {
      loaded.view.phonetic_table = &phonology::PhoneticFeatureTable::builtin();
      loaded.provenance_files["phonetic_table"] = {{"path", "<builtin>"}};
    } else {
      loaded.phon_file =
          phonology::PhoneticFeatureTable::load_csv(cfg.phonetic_table);
      loaded.view.phonetic_table = &*loaded.phon_file;
      note_file(loaded, "phonetic_table", cfg.phonetic_table);
    }
  }
  if (!cfg.context_src.empty()) {
    const std::filesystem::path stopwords = cfg.stopwords_src;
    loaded.src_ctx = context::ContextDictionary::build(
        cfg.context_src, cfg.stopwords_src.empty() ? nullptr : &stopwords,
        cfg.src_lang);
    loaded.view.src_context = &*loaded.src_ctx;
    note_file(loaded, "context_src", cfg.context_src);
    if (!cfg.stopwords_src.empty()) {
      note_file(loaded, "stopwords_src", cfg.stopwords_src);
    }
  }
  if (!cfg.context_tgt.empty()) {
    const std::filesystem::path stopwords = cfg.stopwords_tgt;
    loaded.tgt_ctx = context::ContextDictionary::build(
        cfg.context_tgt, cfg.stopwords_tgt.empty() ? nullptr : &stopwords,
        cfg.tgt_lang);
    loaded.view.tgt_context = &*loaded.tgt_ctx;
    note_file(loaded, "context_tgt", cfg.context_tgt);
    if (!cfg.stopwords_tgt.empty()) {
      note_file(loaded, "stopwords_tgt", cfg.stopwords_tgt);
    }
  }
  return loaded;
}

classifier::FFNNConfig base_config(const RunConfig& cfg) {
  classifier::FFNNConfig base;
  base.initial_lr = cfg.initial_lr;
  base.lr_floor = cfg.lr_floor;
  base.batch_size = cfg.batch_size;
  base.max_epochs = cfg.max_epochs;
  base.seed = cfg.seed;
  return base;
}

std::vector<classifier::FFNNConfig> build_grid(const RunConfig& cfg) {
  if (cfg.grid_hidden.empty() || cfg.grid_activations.empty()) {
    raise(ErrorCode::Config, "grid must name hidden dims and activations");
  }
  std::vector<classifier::FFNNConfig> grid;
  const classifier::FFNNConfig base = base_config(cfg);
  for (const int hidden : cfg.grid_hidden) {
    for (const auto& name : cfg.grid_activations) {
      const auto act = classifier::activation_from_name(name);
      if (!act) {
        raise(ErrorCode::Config, "unknown activation '" + name + "'");
      }
      classifier::FFNNConfig config = base;
      config.hidden_dim = hidden;
      config.activation = *act;
      grid.push_back(config);
    }
  }
  return grid;
}

json run_evaluate(const RunConfig& cfg) {
  if (cfg.dataset.empty()) {
    raise(ErrorCode::Config, "evaluate needs a dataset");
  }
  if (cfg.feature_sets.empty()) {
    raise(ErrorCode::Config, "evaluate needs at least one feature set");
  }
  if (cfg.command == "ablate" && cfg.feature_sets.size() < 2) {
    raise(ErrorCode::Config, "ablate needs at least 2 feature sets");
  }
  if (!cfg.save_model.empty() && cfg.feature_sets.size() != 1) {
    raise(ErrorCode::Config, "save_model needs exactly one feature set");
  }

  std::vector<features::FeatureSetSpec> specs;
  for (const auto& name : cfg.feature_sets) {
    specs.push_back(features::FeatureSetSpec::parse(name));
  }

  const auto data = context::load_dataset(cfg.dataset, cfg.lang_pair);
  if (data.pairs.empty()) {
    raise(ErrorCode::Config, "dataset yielded no usable pairs: " + cfg.dataset);
  }
  LoadedResources loaded = load_resources(cfg, specs);
  note_file(loaded, "dataset", cfg.dataset);

  evaluation::ExperimentParams params;
  params.k = cfg.k;
  params.seed = cfg.seed;
  params.base = base_config(cfg);
  params.grid = build_grid(cfg);
  params.threads = cfg.threads;
  params.provenance = {{"run_config", cfg.expanded},
                       {"resources", loaded.provenance_files},
                       {"dataset_skipped_rows", data.skipped_rows}};

  json reports = json::array();
  for (const auto& spec : specs) {
    const auto report =
        evaluation::run_experiment(data.pairs, loaded.view, spec, params);
    reports.push_back(evaluation::report_to_json(report));
    if (!cfg.dump_features.empty()) {
      const auto assembled =
          features::assemble_dataset(data.pairs, spec, loaded.view);
      const auto names = features::feature_names(spec, loaded.view);
      std::string path = cfg.dump_features;
      if (specs.size() > 1) path += "." + spec.name + ".csv";
      features::write_csv(path, assembled.vectors, names);
    }
  }

  json result = {{"reports", reports}};
  if (!cfg.save_model.empty()) {
    // Final model: grid-search on the full dataset, train, persist.
    const auto assembled =
        features::assemble_dataset(data.pairs, specs[0], loaded.view);
    const auto grid_result = classifier::grid_search(
        assembled.vectors, params.grid, cfg.threads);
    classifier::save_model(grid_result.best.model, cfg.save_model);
    result["saved_model"] = {
        {"path", cfg.save_model},
        {"feature_set", specs[0].name},
        {"input_dim", grid_result.best.model.input_dim},
        {"chosen_config",
         {{"hidden_dim", grid_result.best_config.hidden_dim},
          {"activation",
           classifier::activation_name(grid_result.best_config.activation)}}}};
  }
  return result;
}

json run_predict(const RunConfig& cfg) {
  if (cfg.model.empty()) raise(ErrorCode::Config, "predict needs a model");
  if (cfg.dataset.empty()) raise(ErrorCode::Config, "predict needs a dataset");
  if (cfg.feature_sets.size() != 1) {
    raise(ErrorCode::Config, "predict needs exactly one feature set");
  }
  const auto spec = features::FeatureSetSpec::parse(cfg.feature_sets[0]);
  const auto model = classifier::load_model(cfg.model);
  const auto data =
      context::load_dataset(cfg.dataset, cfg.lang_pair, /*require_label=*/false);
  LoadedResources loaded = load_resources(cfg, {&spec, 1});

  const auto assembled =
      features::assemble_dataset(data.pairs, spec, loaded.view);
  json rows = json::array();
  for (std::size_t i = 0; i < data.pairs.size(); ++i) {
    if (static_cast<int>(assembled.vectors[i].values.size()) !=
        model.input_dim) {
      raise(ErrorCode::Config,
            "feature dimension " +
                std::to_string(assembled.vectors[i].values.size()) +
                " does not match model input_dim " +
                std::to_string(model.input_dim));
    }
    const auto pred =
        classifier::predict(model, assembled.vectors[i].values);
    rows.push_back({{"pair_id", data.pairs[i].pair_id},
                    {"language_pair", data.pairs[i].language_pair},
                    {"word_s", data.pairs[i].word_s},
                    {"word_t", data.pairs[i].word_t},
                    {"label", pred.label},
                    {"probability", pred.probability}});
  }
  return {{"predictions", rows}, {"run_config", cfg.expanded}};
}

}  // namespace

json run(const json& run_config) {
  const RunConfig cfg = parse_config(run_config);
  if (cfg.command == "evaluate" || cfg.command == "ablate") {
    return run_evaluate(cfg);
  }
  if (cfg.command == "predict") {
    return run_predict(cfg);
  }
  raise(ErrorCode::InvalidArgument,
        "unknown command '" + cfg.command +
            "' (expected evaluate, ablate, or predict)");
}

json run_json(std::string_view run_config_text) {
  json config;
  try {
    config = json::parse(run_config_text);
  } catch (const json::exception& e) {
    raise(ErrorCode::Parse, std::string("run config JSON: ") + e.what());
  }
  return run(config);
}

}  // namespace cognate::engine
