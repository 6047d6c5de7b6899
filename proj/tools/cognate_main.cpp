// cognate CLI: drives the toolkit through the shared library's C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cognate/cognate.h"

namespace {

using nlohmann::json;

[[noreturn]] void die(cg_status status) {
  const json j = {{"error",
                   {{"code", cg_status_name(status)},
                    {"message", cg_last_error()}}}};
  std::cerr << j.dump() << "\n";
  std::exit(1);
}

[[noreturn]] void die_message(const std::string& code,
                              const std::string& message) {
  const json j = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  std::exit(1);
}

void check(cg_status status) {
  if (status != CG_OK) die(status);
}

struct CString {
  char* value = nullptr;
  ~CString() { cg_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> read_lines_from(const std::string& path) {
  if (path.empty() || path == "-") return read_lines(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) die_message("io", "cannot open " + path);
  return read_lines(in);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) die_message("io", "cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
};

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Word columns: dataset rows (>= 4 tab fields) carry words at 1 and 2;
// bare pair files carry them at 0 and 1.
std::pair<std::string, std::string> pair_words(const std::string& line) {
  const auto fields = split_fields(line, '\t');
  if (fields.size() >= 4) return {fields[1], fields[2]};
  if (fields.size() >= 2) return {fields[0], fields[1]};
  die_message("parse", "expected at least two tab-separated fields: " + line);
}

std::string transliterate(const std::string& text) {
  CString out;
  check(cg_to_devanagari(text.c_str(), &out.value, nullptr));
  return out.str();
}

// ---- subcommand state ----------------------------------------------------

struct TranslitArgs {
  std::string target = "devanagari";
  std::string in_path, out_path;
};

struct ScoreArgs {
  std::string metric = "wls";
  std::size_t q = 2;
  std::string pairs_path;
  std::string out_path;
};

struct PhonvecArgs {
  std::string table_path;
  std::string words_path;
  std::string out_path;
};

struct EmbSimArgs {
  std::string src_path, tgt_path;
  std::string src_lang = "src", tgt_lang = "tgt";
  std::string tag;
  std::string pairs_path;
  std::string out_path;
};

struct ContextArgs {
  std::string wordnet_path, stopwords_path, language = "hi";
  std::string out_path;
};

struct RunArgs {
  std::string config_path;
  std::string dataset, lang_pair, features;
  std::string emb_src, emb_tgt, emb_tag, src_lang, tgt_lang;
  std::string phon_table;
  std::string context_src, context_tgt, stopwords_src, stopwords_tgt;
  std::size_t q = 2, context_cap = 50;
  bool skip_oov_context = false;
  int k = 5;
  long long seed = 42;
  unsigned threads = 0;
  std::string grid_hidden, grid_activations;
  double initial_lr = 0.4, lr_floor = 0.001;
  int batch_size = 64, max_epochs = 500;
  std::string save_model, dump_features, model;
  std::string format = "json";
  std::string out_path;
};

struct InjectArgs {
  std::string src_in, tgt_in, pairs, src_out, tgt_out, lang_pair;
  bool include_non_cognates = false;
};

struct BpeLearnArgs {
  std::string corpus;
  std::size_t merges = 2500;
  std::string out_path;
};

struct BpeApplyArgs {
  std::string merges_path;
  std::string in_path, out_path;
};

// ---- subcommand drivers ---------------------------------------------------

int run_translit(const TranslitArgs& args) {
  if (args.target != "devanagari") {
    die_message("invalid_argument",
                "only 'devanagari' is supported as a target script");
  }
  Output out(args.out_path);
  for (const auto& line : read_lines_from(args.in_path)) {
    CString mapped;
    check(cg_to_devanagari(line.c_str(), &mapped.value, nullptr));
    out.stream() << mapped.str() << '\n';
  }
  return 0;
}

int run_score(const ScoreArgs& args) {
  Output out(args.out_path);
  char buf[64];
  for (const auto& line : read_lines_from(args.pairs_path)) {
    if (line.empty()) continue;
    auto [raw_a, raw_b] = pair_words(line);
    const std::string a = transliterate(raw_a);
    const std::string b = transliterate(raw_b);
    out.stream() << line;
    if (args.metric == "ned") {
      double v = 0;
      check(cg_ned_similarity(a.c_str(), b.c_str(), &v));
      std::snprintf(buf, sizeof buf, "%.6f", v);
      out.stream() << '\t' << buf;
    } else if (args.metric == "qgram") {
      size_t d = 0;
      double v = 0;
      check(cg_qgram_distance(a.c_str(), b.c_str(), args.q, &d));
      check(cg_qgram_similarity(a.c_str(), b.c_str(), args.q, &v));
      std::snprintf(buf, sizeof buf, "%zu\t%.6f", d, v);
      out.stream() << '\t' << buf;
    } else if (args.metric == "wls") {
      double v = 0;
      check(cg_wls(a.c_str(), b.c_str(), args.q, &v));
      std::snprintf(buf, sizeof buf, "%.6f", v);
      out.stream() << '\t' << buf;
    } else {
      die_message("invalid_argument", "unknown metric " + args.metric);
    }
    out.stream() << '\n';
  }
  return 0;
}

int run_phonvec(const PhonvecArgs& args) {
  cg_phonetic_table* table = nullptr;
  check(cg_phonetic_table_open(
      args.table_path.empty() ? nullptr : args.table_path.c_str(), &table));
  const std::unique_ptr<cg_phonetic_table, decltype(&cg_phonetic_table_close)>
      guard(table, cg_phonetic_table_close);
  size_t dim = 0;
  check(cg_phonetic_table_dimension(table, &dim));

  Output out(args.out_path);
  std::vector<double> vec(dim);
  char buf[64];
  for (const auto& line : read_lines_from(args.words_path)) {
    if (line.empty()) continue;
    const std::string word = transliterate(line);
    int oov = 0;
    check(cg_word_phonetic_vector(table, word.c_str(), vec.data(), dim, &oov));
    out.stream() << line << '\t';
    for (size_t i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, "%g", vec[i]);
      out.stream() << (i ? " " : "") << buf;
    }
    if (oov) out.stream() << "\t#oov";
    out.stream() << '\n';
  }
  return 0;
}

int run_emb_sim(const EmbSimArgs& args) {
  cg_embeddings* src = nullptr;
  cg_embeddings* tgt = nullptr;
  check(cg_embeddings_open(args.src_path.c_str(), args.src_lang.c_str(),
                           args.tag.empty() ? nullptr : args.tag.c_str(),
                           &src));
  const std::unique_ptr<cg_embeddings, decltype(&cg_embeddings_close)>
      src_guard(src, cg_embeddings_close);
  check(cg_embeddings_open(args.tgt_path.c_str(), args.tgt_lang.c_str(),
                           args.tag.empty() ? nullptr : args.tag.c_str(),
                           &tgt));
  const std::unique_ptr<cg_embeddings, decltype(&cg_embeddings_close)>
      tgt_guard(tgt, cg_embeddings_close);

  size_t dim_s = 0, dim_t = 0;
  check(cg_embeddings_dimension(src, &dim_s));
  check(cg_embeddings_dimension(tgt, &dim_t));
  if (dim_s != dim_t) {
    die_message("config", "embedding tables disagree on dimension");
  }

  Output out(args.out_path);
  std::vector<double> u(dim_s), v(dim_s);
  char buf[64];
  for (const auto& line : read_lines_from(args.pairs_path)) {
    if (line.empty()) continue;
    auto [raw_a, raw_b] = pair_words(line);
    const std::string a = transliterate(raw_a);
    const std::string b = transliterate(raw_b);
    int oov_a = 0, oov_b = 0;
    check(cg_embeddings_lookup(src, a.c_str(), u.data(), dim_s, &oov_a));
    check(cg_embeddings_lookup(tgt, b.c_str(), v.data(), dim_s, &oov_b));
    double sim = 0;
    check(cg_angular_similarity(u.data(), v.data(), dim_s, &sim, nullptr));
    std::snprintf(buf, sizeof buf, "%.6f", sim);
    out.stream() << line << '\t' << buf << '\t' << oov_a << '\t' << oov_b
                 << '\n';
  }
  return 0;
}

cg_context_dict* open_context(const ContextArgs& args) {
  cg_context_dict* dict = nullptr;
  check(cg_context_dict_build(
      args.wordnet_path.c_str(),
      args.stopwords_path.empty() ? nullptr : args.stopwords_path.c_str(),
      args.language.c_str(), &dict));
  return dict;
}

int run_context_build(const ContextArgs& args) {
  cg_context_dict* dict = open_context(args);
  const std::unique_ptr<cg_context_dict, decltype(&cg_context_dict_close)>
      guard(dict, cg_context_dict_close);
  check(cg_context_dict_save(dict, args.out_path.c_str()));
  CString stats;
  check(cg_context_dict_stats(dict, &stats.value));
  std::cerr << stats.str() << "\n";
  return 0;
}

int run_context_stats(const ContextArgs& args) {
  cg_context_dict* dict = open_context(args);
  const std::unique_ptr<cg_context_dict, decltype(&cg_context_dict_close)>
      guard(dict, cg_context_dict_close);
  CString stats;
  check(cg_context_dict_stats(dict, &stats.value));
  std::cout << stats.str() << "\n";
  return 0;
}

// Builds the RunConfig JSON: defaults < config file < explicit flags.
json build_run_config(const RunArgs& args, const CLI::App* cmd,
                      const std::string& command) {
  json config = json::object();
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) die_message("io", "cannot open config " + args.config_path);
    try {
      in >> config;
    } catch (const json::exception& e) {
      die_message("parse", "config JSON: " + std::string(e.what()));
    }
  }
  config["command"] = command;

  const auto given = [cmd](const std::string& flag) {
    const auto* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  const auto csv_list = [](const std::string& s) {
    std::vector<std::string> items;
    for (auto& item : split_fields(s, ',')) {
      if (!item.empty()) items.push_back(item);
    }
    return items;
  };

  if (given("--dataset")) config["dataset"] = args.dataset;
  if (given("--lang-pair")) config["lang_pair"] = args.lang_pair;
  if (given("--features")) config["feature_sets"] = csv_list(args.features);
  if (given("--emb-src")) config["emb_src"] = args.emb_src;
  if (given("--emb-tgt")) config["emb_tgt"] = args.emb_tgt;
  if (given("--emb-tag")) config["emb_tag"] = args.emb_tag;
  if (given("--src-lang")) config["src_lang"] = args.src_lang;
  if (given("--tgt-lang")) config["tgt_lang"] = args.tgt_lang;
  if (given("--phonetic-table")) config["phonetic_table"] = args.phon_table;
  if (given("--context-src")) config["context_src"] = args.context_src;
  if (given("--context-tgt")) config["context_tgt"] = args.context_tgt;
  if (given("--stopwords-src")) config["stopwords_src"] = args.stopwords_src;
  if (given("--stopwords-tgt")) config["stopwords_tgt"] = args.stopwords_tgt;
  if (given("--q")) config["q_len"] = args.q;
  if (given("--context-cap")) config["context_cap"] = args.context_cap;
  if (given("--skip-oov-context")) {
    config["skip_oov_context"] = args.skip_oov_context;
  }
  if (given("--k")) config["k"] = args.k;
  if (given("--seed")) config["seed"] = args.seed;
  if (given("--threads")) config["threads"] = args.threads;
  if (given("--grid-hidden")) {
    std::vector<int> dims;
    for (const auto& item : csv_list(args.grid_hidden)) {
      dims.push_back(std::stoi(item));
    }
    config["grid_hidden"] = dims;
  }
  if (given("--grid-activations")) {
    config["grid_activations"] = csv_list(args.grid_activations);
  }
  if (given("--initial-lr")) config["initial_lr"] = args.initial_lr;
  if (given("--lr-floor")) config["lr_floor"] = args.lr_floor;
  if (given("--batch-size")) config["batch_size"] = args.batch_size;
  if (given("--max-epochs")) config["max_epochs"] = args.max_epochs;
  if (given("--save-model")) config["save_model"] = args.save_model;
  if (given("--dump-features")) config["dump_features"] = args.dump_features;
  if (given("--model")) config["model"] = args.model;
  return config;
}

int run_experiment_command(const RunArgs& args, const CLI::App* cmd,
                           const std::string& command) {
  const json config = build_run_config(args, cmd, command);
  // Required inputs may come from flags or the config file; missing ones are
  // usage errors (exit 2), not runtime failures.
  const auto require_key = [&config](const char* key, const char* flag) {
    if (!config.contains(key) || config.at(key).is_null() ||
        (config.at(key).is_string() &&
         config.at(key).get<std::string>().empty())) {
      std::cerr << "missing required " << flag << " (or '" << key
                << "' in --config)\nrun with --help for usage\n";
      std::exit(2);
    }
  };
  require_key("dataset", "--dataset");
  if (command == "predict") {
    require_key("model", "--model");
  }
  require_key("feature_sets", "--features");

  // format/out obey the same precedence but stay on the CLI side.
  std::string format = args.format;
  std::string out_path = args.out_path;
  const auto* format_opt = cmd->get_option_no_throw("--format");
  if ((format_opt == nullptr || format_opt->count() == 0) &&
      config.contains("format")) {
    format = config.at("format").get<std::string>();
  }
  if (cmd->get_option_no_throw("--out")->count() == 0 &&
      config.contains("out")) {
    out_path = config.at("out").get<std::string>();
  }
  CString result;
  check(cg_run(config.dump().c_str(), &result.value));
  const json parsed = json::parse(result.str());

  Output out(out_path);
  if (command == "predict") {
    for (const auto& row : parsed.at("predictions")) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f",
                    row.at("probability").get<double>());
      out.stream() << row.at("language_pair").get<std::string>() << '\t'
                   << row.at("word_s").get<std::string>() << '\t'
                   << row.at("word_t").get<std::string>() << '\t'
                   << row.at("label").get<int>() << '\t' << buf << '\n';
    }
    return 0;
  }
  CString rendered;
  check(cg_render_reports(parsed.at("reports").dump().c_str(),
                          format.c_str(), &rendered.value));
  out.stream() << rendered.str();
  if (parsed.contains("saved_model")) {
    std::cerr << json({{"saved_model", parsed.at("saved_model")}}).dump()
              << "\n";
  }
  return 0;
}

int run_inject(const InjectArgs& args) {
  size_t appended = 0;
  CString stats;
  check(cg_inject_cognates_files(
      args.src_in.c_str(), args.tgt_in.c_str(), args.pairs.c_str(),
      args.lang_pair.empty() ? nullptr : args.lang_pair.c_str(),
      args.include_non_cognates ? 0 : 1, args.src_out.c_str(),
      args.tgt_out.c_str(), &appended, &stats.value));
  std::cout << stats.str() << "\n";
  return 0;
}

int run_bpe_learn(const BpeLearnArgs& args) {
  cg_bpe* model = nullptr;
  check(cg_bpe_learn_file(args.corpus.c_str(), args.merges, &model));
  const std::unique_ptr<cg_bpe, decltype(&cg_bpe_close)> guard(model,
                                                               cg_bpe_close);
  check(cg_bpe_save(model, args.out_path.c_str()));
  size_t learned = 0;
  check(cg_bpe_merge_count(model, &learned));
  std::cerr << json({{"merges_requested", args.merges},
                     {"merges_learned", learned}})
                   .dump()
            << "\n";
  return 0;
}

int run_bpe_apply(const BpeApplyArgs& args) {
  cg_bpe* model = nullptr;
  check(cg_bpe_open(args.merges_path.c_str(), &model));
  const std::unique_ptr<cg_bpe, decltype(&cg_bpe_close)> guard(model,
                                                               cg_bpe_close);
  Output out(args.out_path);
  for (const auto& line : read_lines_from(args.in_path)) {
    CString segmented;
    check(cg_bpe_apply_line(model, line.c_str(), &segmented.value));
    out.stream() << segmented.str() << '\n';
  }
  return 0;
}

void add_run_flags(CLI::App* cmd, RunArgs& args, bool for_predict) {
  cmd->add_option("--config", args.config_path,
                  "RunConfig JSON file (flags override its values)");
  cmd->add_option("--dataset", args.dataset, "dataset TSV");
  cmd->add_option("--lang-pair", args.lang_pair,
                  "restrict to one language pair");
  cmd->add_option("--features", args.features,
                  "feature sets, comma separated (WLS, PVS, XL, XL+WLS, ...)");
  cmd->add_option("--emb-src", args.emb_src, "source embeddings (.vec)");
  cmd->add_option("--emb-tgt", args.emb_tgt, "target embeddings (.vec)");
  cmd->add_option("--emb-tag", args.emb_tag,
                  "alignment tag recorded in reports (e.g. muse)");
  cmd->add_option("--src-lang", args.src_lang, "source language code");
  cmd->add_option("--tgt-lang", args.tgt_lang, "target language code");
  cmd->add_option("--phonetic-table", args.phon_table,
                  "phonetic feature CSV (default: built-in)");
  cmd->add_option("--context-src", args.context_src,
                  "source context TSV (wordnet export)");
  cmd->add_option("--context-tgt", args.context_tgt, "target context TSV");
  cmd->add_option("--stopwords-src", args.stopwords_src,
                  "source stopword list");
  cmd->add_option("--stopwords-tgt", args.stopwords_tgt,
                  "target stopword list");
  cmd->add_option("--q", args.q, "q-gram length")->check(CLI::PositiveNumber);
  cmd->add_option("--context-cap", args.context_cap,
                  "token cap per side for contextual WLS");
  cmd->add_flag("--skip-oov-context", args.skip_oov_context,
                "drop oov tokens from embedding context means");
  cmd->add_option("--threads", args.threads, "worker threads (0 = cores)");
  cmd->add_option("--out", args.out_path, "output file (default stdout)");
  if (for_predict) {
    cmd->add_option("--model", args.model, "trained model JSON");
  } else {
    cmd->add_option("--k", args.k, "fold count")->check(CLI::Range(2, 100));
    cmd->add_option("--seed", args.seed, "root random seed");
    cmd->add_option("--grid-hidden", args.grid_hidden,
                    "hidden dims, comma separated (default 30,50,100,150)");
    cmd->add_option("--grid-activations", args.grid_activations,
                    "activations, comma separated (default all four)");
    cmd->add_option("--initial-lr", args.initial_lr, "initial learning rate");
    cmd->add_option("--lr-floor", args.lr_floor, "stop once lr drops below");
    cmd->add_option("--batch-size", args.batch_size, "mini-batch size");
    cmd->add_option("--max-epochs", args.max_epochs, "epoch safety cap");
    cmd->add_option("--save-model", args.save_model,
                    "train on the full dataset and save the model here");
    cmd->add_option("--dump-features", args.dump_features,
                    "write assembled feature matrix CSV here");
    cmd->add_option("--format", args.format, "json|csv|markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cognate detection toolkit for Indic language pairs"};
  app.require_subcommand(1);

  TranslitArgs translit;
  auto* translit_cmd =
      app.add_subcommand("translit", "transliterate text to Devanagari");
  translit_cmd->add_option("--to", translit.target, "target script")
      ->default_str("devanagari");
  translit_cmd->add_option("--in", translit.in_path, "input file (default stdin)");
  translit_cmd->add_option("--out", translit.out_path,
                           "output file (default stdout)");

  ScoreArgs score;
  auto* score_cmd =
      app.add_subcommand("score", "append string-similarity columns to pairs");
  score_cmd->add_option("--metric", score.metric, "ned|qgram|wls")
      ->check(CLI::IsMember({"ned", "qgram", "wls"}));
  score_cmd->add_option("--q", score.q, "q-gram length")
      ->check(CLI::PositiveNumber);
  score_cmd->add_option("pairs", score.pairs_path, "pairs TSV (default stdin)");
  score_cmd->add_option("--out", score.out_path, "output file");

  PhonvecArgs phonvec;
  auto* phonvec_cmd =
      app.add_subcommand("phonvec", "emit phonetic vectors, one word per line");
  phonvec_cmd->add_option("--table", phonvec.table_path,
                          "phonetic feature CSV (default: built-in)");
  phonvec_cmd->add_option("words", phonvec.words_path,
                          "word list (default stdin)");
  phonvec_cmd->add_option("--out", phonvec.out_path, "output file");

  EmbSimArgs embsim;
  auto* embsim_cmd = app.add_subcommand(
      "emb-sim", "append angular embedding similarity to pairs");
  embsim_cmd->add_option("--src", embsim.src_path, "source .vec file")
      ->required();
  embsim_cmd->add_option("--tgt", embsim.tgt_path, "target .vec file")
      ->required();
  embsim_cmd->add_option("--src-lang", embsim.src_lang, "source language");
  embsim_cmd->add_option("--tgt-lang", embsim.tgt_lang, "target language");
  embsim_cmd->add_option("--tag", embsim.tag, "alignment tag");
  embsim_cmd->add_option("pairs", embsim.pairs_path, "pairs TSV");
  embsim_cmd->add_option("--out", embsim.out_path, "output file");

  ContextArgs context;
  auto* context_cmd =
      app.add_subcommand("context", "build or inspect context dictionaries");
  context_cmd->require_subcommand(1);
  auto* context_build = context_cmd->add_subcommand(
      "build", "build a dictionary and save it as TSV");
  auto* context_stats =
      context_cmd->add_subcommand("stats", "print dictionary statistics");
  for (auto* sub : {context_build, context_stats}) {
    sub->add_option("--wordnet", context.wordnet_path,
                    "wordnet export TSV (word TAB gloss TAB examples)")
        ->required();
    sub->add_option("--stopwords", context.stopwords_path, "stopword list");
    sub->add_option("--lang", context.language, "language code");
  }
  context_build->add_option("--out", context.out_path, "output TSV")
      ->required();

  RunArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "stratified k-fold evaluation of feature sets");
  add_run_flags(evaluate_cmd, evaluate, /*for_predict=*/false);

  RunArgs ablate;
  auto* ablate_cmd = app.add_subcommand(
      "ablate", "paired comparison of >= 2 feature sets on shared folds");
  add_run_flags(ablate_cmd, ablate, /*for_predict=*/false);

  RunArgs predict;
  auto* predict_cmd =
      app.add_subcommand("predict", "label pairs with a trained model");
  add_run_flags(predict_cmd, predict, /*for_predict=*/true);

  InjectArgs inject;
  auto* augment_cmd =
      app.add_subcommand("augment", "parallel-corpus augmentation");
  augment_cmd->require_subcommand(1);
  auto* inject_cmd = augment_cmd->add_subcommand(
      "inject", "append cognates as single-word sentence pairs");
  inject_cmd->add_option("--src-in", inject.src_in, "source corpus")
      ->required();
  inject_cmd->add_option("--tgt-in", inject.tgt_in, "target corpus")
      ->required();
  inject_cmd->add_option("--pairs", inject.pairs, "cognate TSV")->required();
  inject_cmd->add_option("--src-out", inject.src_out, "source output")
      ->required();
  inject_cmd->add_option("--tgt-out", inject.tgt_out, "target output")
      ->required();
  inject_cmd->add_option("--lang-pair", inject.lang_pair,
                         "only inject rows of this language pair");
  inject_cmd->add_flag("--include-non-cognates", inject.include_non_cognates,
                       "inject rows labeled 0 as well");

  BpeLearnArgs bpe_learn;
  BpeApplyArgs bpe_apply;
  auto* bpe_cmd = app.add_subcommand("bpe", "byte-pair encoding");
  bpe_cmd->require_subcommand(1);
  auto* bpe_learn_cmd =
      bpe_cmd->add_subcommand("learn", "learn merges from a corpus side");
  bpe_learn_cmd->add_option("--corpus", bpe_learn.corpus, "corpus file")
      ->required();
  bpe_learn_cmd->add_option("--merges", bpe_learn.merges, "merge operations");
  bpe_learn_cmd->add_option("--out", bpe_learn.out_path, "merges file")
      ->required();
  auto* bpe_apply_cmd =
      bpe_cmd->add_subcommand("apply", "segment text with learned merges");
  bpe_apply_cmd->add_option("--merges", bpe_apply.merges_path, "merges file")
      ->required();
  bpe_apply_cmd->add_option("--in", bpe_apply.in_path,
                            "input file (default stdin)");
  bpe_apply_cmd->add_option("--out", bpe_apply.out_path,
                            "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help for the right (sub)command, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    if (app.got_subcommand(translit_cmd)) return run_translit(translit);
    if (app.got_subcommand(score_cmd)) return run_score(score);
    if (app.got_subcommand(phonvec_cmd)) return run_phonvec(phonvec);
    if (app.got_subcommand(embsim_cmd)) return run_emb_sim(embsim);
    if (app.got_subcommand(context_cmd)) {
      if (context_cmd->got_subcommand(context_build)) {
        return run_context_build(context);
      }
      return run_context_stats(context);
    }
    if (app.got_subcommand(evaluate_cmd)) {
      return run_experiment_command(evaluate, evaluate_cmd, "evaluate");
    }
    if (app.got_subcommand(ablate_cmd)) {
      return run_experiment_command(ablate, ablate_cmd, "ablate");
    }
    if (app.got_subcommand(predict_cmd)) {
      return run_experiment_command(predict, predict_cmd, "predict");
    }
    if (app.got_subcommand(augment_cmd)) return run_inject(inject);
    if (app.got_subcommand(bpe_cmd)) {
      if (bpe_cmd->got_subcommand(bpe_learn_cmd)) {
        return run_bpe_learn(bpe_learn);
      }
      return run_bpe_apply(bpe_apply);
    }
  } catch (const std::exception& e) {
    die_message("internal", e.what());
  }
  return 2;
}
