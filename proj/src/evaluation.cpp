#include "evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "error.hpp"
#include "rng.hpp"

namespace cognate::evaluation {

namespace {

std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t state = 0xCBF29CE484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state ^= bytes[i];
    state *= 0x100000001B3ULL;
  }
  return state;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

std::string FoldAssignment::digest() const {
  std::uint64_t h = fnv1a64(&fold_count, sizeof fold_count);
  h = fnv1a64(fold_of.data(), fold_of.size() * sizeof(int), h);
  return hex64(h);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open for digest: " + path.string());
  char buf[1 << 16];
  std::uint64_t h = 0xCBF29CE484222325ULL;
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return hex64(h);
}

FoldAssignment stratified_kfold(std::span<const int> labels, int k,
                                std::uint64_t seed) {
  if (k < 2) raise(ErrorCode::InvalidArgument, "fold count must be >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      raise(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<std::size_t>(k)) {
      raise(ErrorCode::InvalidArgument,
            "class " + std::to_string(c) + " has " +
                std::to_string(by_class[c].size()) +
                " members, fewer than k=" + std::to_string(k));
    }
  }
  FoldAssignment assignment;
  assignment.fold_count = k;
  assignment.seed = seed;
  assignment.fold_of.assign(labels.size(), 0);
  rng::Engine eng(seed);
  for (auto& members : by_class) {
    rng::shuffle(members, eng);
    for (std::size_t i = 0; i < members.size(); ++i) {
      assignment.fold_of[members[i]] = static_cast<int>(i % k);
    }
  }
  return assignment;
}

namespace {

ClassPrf class_prf(std::size_t tp, std::size_t fp, std::size_t fn,
                   std::size_t support) {
  ClassPrf out;
  out.support = support;
  out.precision = (tp + fp) == 0
                      ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fp);
  out.recall = (tp + fn) == 0
                   ? 0.0
                   : static_cast<double>(tp) / static_cast<double>(tp + fn);
  out.f1 = (out.precision + out.recall) == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall /
                     (out.precision + out.recall);
  return out;
}

}  // namespace

WeightedPrf weighted_prf(std::span<const int> y_true,
                         std::span<const int> y_pred) {
  if (y_true.empty() || y_true.size() != y_pred.size()) {
    raise(ErrorCode::InvalidArgument,
          "weighted_prf needs equal-length nonempty label sequences");
  }
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) {
      (y_pred[i] == 1 ? tp : fn) += 1;
    } else {
      (y_pred[i] == 1 ? fp : tn) += 1;
    }
  }
  WeightedPrf out;
  out.total = y_true.size();
  out.positive = class_prf(tp, fp, fn, tp + fn);
  // For the negative class, "true positive" means predicted 0 and true 0.
  out.negative = class_prf(tn, fn, fp, tn + fp);
  const double w_pos = static_cast<double>(out.positive.support) / out.total;
  const double w_neg = static_cast<double>(out.negative.support) / out.total;
  out.precision = w_pos * out.positive.precision + w_neg * out.negative.precision;
  out.recall = w_pos * out.positive.recall + w_neg * out.negative.recall;
  out.f1 = w_pos * out.positive.f1 + w_neg * out.negative.f1;
  return out;
}

namespace {

std::string dataset_language_pair(std::span<const context::WordPair> pairs) {
  std::set<std::string> seen;
  for (const auto& p : pairs) seen.insert(p.language_pair);
  if (seen.empty()) return "";
  if (seen.size() == 1) return *seen.begin();
  return "mixed(" + std::to_string(seen.size()) + ")";
}

std::string display_name(const features::FeatureSetSpec& spec,
                         const features::Resources& res) {
  std::string name = spec.name;
  if (spec.has_xl && res.src_embeddings != nullptr &&
      !res.src_embeddings->source_tag().empty()) {
    const std::string tag = res.src_embeddings->source_tag();
    name.replace(name.find("XL"), 2, "XL(" + tag + ")");
  }
  return name;
}

nlohmann::json config_json(const classifier::FFNNConfig& c) {
  return {{"hidden_dim", c.hidden_dim},
          {"activation", classifier::activation_name(c.activation)},
          {"initial_lr", c.initial_lr},
          {"lr_floor", c.lr_floor},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"max_epochs", c.max_epochs}};
}

}  // namespace

ExperimentReport run_experiment(std::span<const context::WordPair> pairs,
                                const features::Resources& resources,
                                const features::FeatureSetSpec& spec,
                                const ExperimentParams& params) {
  if (pairs.empty()) {
    raise(ErrorCode::InvalidArgument, "run_experiment: empty dataset");
  }
  resources.validate(spec);

  const auto assembled = features::assemble_dataset(pairs, spec, resources);
  std::vector<int> labels(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) labels[i] = pairs[i].label;
  const FoldAssignment folds = stratified_kfold(labels, params.k, params.seed);

  classifier::FFNNConfig base = params.base;
  base.seed = params.seed;
  const std::vector<classifier::FFNNConfig> grid =
      params.grid.empty() ? classifier::default_grid(base) : params.grid;

  ExperimentReport report;
  report.language_pair = dataset_language_pair(pairs);
  report.feature_set = display_name(spec, resources);
  report.k = params.k;
  report.seed = params.seed;
  report.stats = assembled.stats;
  report.fold_digest = folds.digest();
  report.provenance = params.provenance;
  report.provenance["grid"] = nlohmann::json::array();
  for (const auto& config : grid) {
    report.provenance["grid"].push_back(config_json(config));
  }

  std::vector<int> pooled_true, pooled_pred;
  pooled_true.reserve(pairs.size());
  pooled_pred.reserve(pairs.size());

  for (int fold = 0; fold < params.k; ++fold) {
    std::vector<features::FeatureVector> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (folds.fold_of[i] == fold) {
        test_rows.push_back(i);
      } else {
        train_rows.push_back(assembled.vectors[i]);
      }
    }
    const auto grid_result =
        classifier::grid_search(train_rows, grid, params.threads);

    std::vector<int> y_true, y_pred;
    y_true.reserve(test_rows.size());
    y_pred.reserve(test_rows.size());
    for (const std::size_t i : test_rows) {
      y_true.push_back(labels[i]);
      y_pred.push_back(
          classifier::predict(grid_result.best.model,
                              assembled.vectors[i].values).label);
    }
    pooled_true.insert(pooled_true.end(), y_true.begin(), y_true.end());
    pooled_pred.insert(pooled_pred.end(), y_pred.begin(), y_pred.end());

    FoldOutcome outcome;
    outcome.fold_index = fold;
    outcome.metrics = weighted_prf(y_true, y_pred);
    outcome.chosen_config = grid_result.best_config;
    outcome.validation_accuracy =
        1.0 - grid_result.best.trace.best_val_error;
    outcome.train_size = train_rows.size();
    outcome.test_size = test_rows.size();
    report.folds.push_back(std::move(outcome));
  }

  for (const auto& fold : report.folds) {
    report.mean.precision += fold.metrics.precision;
    report.mean.recall += fold.metrics.recall;
    report.mean.f1 += fold.metrics.f1;
  }
  report.mean.precision /= params.k;
  report.mean.recall /= params.k;
  report.mean.f1 /= params.k;

  const WeightedPrf pooled = weighted_prf(pooled_true, pooled_pred);
  report.pooled = {pooled.precision, pooled.recall, pooled.f1};
  return report;
}

std::vector<ExperimentReport> run_ablation(
    std::span<const context::WordPair> pairs,
    const features::Resources& resources,
    std::span<const features::FeatureSetSpec> specs,
    const ExperimentParams& params) {
  if (specs.size() < 2) {
    raise(ErrorCode::InvalidArgument,
          "ablation needs at least 2 feature sets");
  }
  std::vector<ExperimentReport> reports;
  reports.reserve(specs.size());
  for (const auto& spec : specs) {
    reports.push_back(run_experiment(pairs, resources, spec, params));
  }
  return reports;
}

namespace {

std::string round2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

nlohmann::json prf_json(const ClassPrf& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support}};
}

nlohmann::json mean_json(const MeanPrf& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : report.folds) {
    folds.push_back(
        {{"fold", fold.fold_index},
         {"precision", fold.metrics.precision},
         {"recall", fold.metrics.recall},
         {"f1", fold.metrics.f1},
         {"class_positive", prf_json(fold.metrics.positive)},
         {"class_negative", prf_json(fold.metrics.negative)},
         {"chosen_config", config_json(fold.chosen_config)},
         {"validation_accuracy", fold.validation_accuracy},
         {"train_size", fold.train_size},
         {"test_size", fold.test_size}});
  }
  return {{"language_pair", report.language_pair},
          {"feature_set", report.feature_set},
          {"k", report.k},
          {"seed", report.seed},
          {"folds", folds},
          {"mean", mean_json(report.mean)},
          {"pooled", mean_json(report.pooled)},
          {"display",
           {{"precision", round2(report.mean.precision)},
            {"recall", round2(report.mean.recall)},
            {"f1", round2(report.mean.f1)}}},
          {"dataset_stats",
           {{"pairs", report.stats.pair_count},
            {"positives", report.stats.positives},
            {"negatives", report.stats.negatives},
            {"embedding_oov_s", report.stats.embedding_oov_s},
            {"embedding_oov_t", report.stats.embedding_oov_t},
            {"phonetic_oov_s", report.stats.phonetic_oov_s},
            {"phonetic_oov_t", report.stats.phonetic_oov_t},
            {"context_miss_s", report.stats.context_miss_s},
            {"context_miss_t", report.stats.context_miss_t},
            {"degenerate_scores", report.stats.degenerate_scores}}},
          {"fold_digest", report.fold_digest},
          {"provenance", report.provenance}};
}

std::string render_reports(std::span<const nlohmann::json> reports,
                           std::string_view format) {
  if (format == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) out.push_back(r);
    return out.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "language_pair,feature_set,precision,recall,f1\n";
    for (const auto& r : reports) {
      out += r.at("language_pair").get<std::string>() + ',' +
             r.at("feature_set").get<std::string>() + ',' +
             r.at("display").at("precision").get<std::string>() + ',' +
             r.at("display").at("recall").get<std::string>() + ',' +
             r.at("display").at("f1").get<std::string>() + '\n';
    }
    return out;
  }
  if (format == "markdown") {
    // Rows keyed by language pair, one P/R/F column group per feature set.
    std::vector<std::string> sets;
    std::vector<std::string> lps;
    for (const auto& r : reports) {
      const auto set = r.at("feature_set").get<std::string>();
      const auto lp = r.at("language_pair").get<std::string>();
      if (std::find(sets.begin(), sets.end(), set) == sets.end()) {
        sets.push_back(set);
      }
      if (std::find(lps.begin(), lps.end(), lp) == lps.end()) {
        lps.push_back(lp);
      }
    }
    std::string out = "| LP |";
    for (const auto& s : sets) out += " " + s + " P | R | F |";
    out += "\n|----|";
    for (std::size_t i = 0; i < sets.size() * 3; ++i) out += "----|";
    out += "\n";
    for (const auto& lp : lps) {
      out += "| " + lp + " |";
      for (const auto& s : sets) {
        const nlohmann::json* match = nullptr;
        for (const auto& r : reports) {
          if (r.at("language_pair") == lp && r.at("feature_set") == s) {
            match = &r;
            break;
          }
        }
        if (match) {
          out += " " + match->at("display").at("precision").get<std::string>() +
                 " | " + match->at("display").at("recall").get<std::string>() +
                 " | " + match->at("display").at("f1").get<std::string>() +
                 " |";
        } else {
          out += " - | - | - |";
        }
      }
      out += "\n";
    }
    return out;
  }
  raise(ErrorCode::InvalidArgument,
        "unknown report format '" + std::string(format) +
            "' (expected json, csv, or markdown)");
}

}  // namespace cognate::evaluation
