#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifier.hpp"
#include "context.hpp"
#include "features.hpp"

namespace cognate::evaluation {

struct FoldAssignment {
  int fold_count = 0;
  std::uint64_t seed = 0;
  std::vector<int> fold_of;  // fold index per dataset position

  // fnv1a64 over the assignment; equal digests certify shared folds.
  std::string digest() const;
};

// Seeded shuffle within each class, then round-robin assignment; per-fold
// class counts stay within 1 of exact proportionality. A class with fewer
// than k members is an error.
FoldAssignment stratified_kfold(std::span<const int> labels, int k,
                                std::uint64_t seed);

struct ClassPrf {
  double precision = 0.0;  // 0/0 counts as 0
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct WeightedPrf {
  ClassPrf positive, negative;
  double precision = 0.0;  // support-weighted means
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t total = 0;
};

WeightedPrf weighted_prf(std::span<const int> y_true,
                         std::span<const int> y_pred);

struct FoldOutcome {
  int fold_index = 0;
  WeightedPrf metrics;
  classifier::FFNNConfig chosen_config;
  double validation_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct MeanPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ExperimentParams {
  int k = 5;
  std::uint64_t seed = 42;
  classifier::FFNNConfig base;  // lr schedule, batch, epochs; seed overwritten
  std::vector<classifier::FFNNConfig> grid;  // empty selects the default grid
  unsigned threads = 1;
  nlohmann::json provenance;  // caller-supplied (resource paths, digests, ...)
};

struct ExperimentReport {
  std::string language_pair;
  std::string feature_set;  // display name, e.g. "XL(muse)+WLS"
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<FoldOutcome> folds;
  MeanPrf mean;    // unweighted mean of per-fold weighted metrics (displayed)
  MeanPrf pooled;  // weighted metrics over predictions pooled across folds
  features::DatasetStats stats;
  std::string fold_digest;
  nlohmann::json provenance;
};

// Per fold: grid-search on the training fold (each candidate trains with its
// own internal validation split), then score the selected model on the
// held-out fold. Training never sees held-out rows.
ExperimentReport run_experiment(std::span<const context::WordPair> pairs,
                                const features::Resources& resources,
                                const features::FeatureSetSpec& spec,
                                const ExperimentParams& params);

// One run_experiment per set under identical folds (same seed); needs >= 2.
std::vector<ExperimentReport> run_ablation(
    std::span<const context::WordPair> pairs,
    const features::Resources& resources,
    std::span<const features::FeatureSetSpec> specs,
    const ExperimentParams& params);

nlohmann::json report_to_json(const ExperimentReport& report);

// "json" (array, full precision), "csv", or "markdown" (Table-style rows of
// display-rounded mean metrics, one column group per feature set).
std::string render_reports(std::span<const nlohmann::json> reports,
                           std::string_view format);

// fnv1a64 hex digest of a file's bytes (provenance records).
std::string file_digest(const std::filesystem::path& path);

}  // namespace cognate::evaluation
