#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "features.hpp"

namespace cognate::classifier {

// Order defines the grid-search tie-break.
enum class Activation { Tanh, HardTanh, Sigmoid, Relu };

const char* activation_name(Activation activation);
std::optional<Activation> activation_from_name(std::string_view name);

struct FFNNConfig {
  int hidden_dim = 100;  // 0 selects logistic regression
  Activation activation = Activation::Tanh;
  double initial_lr = 0.4;
  double lr_floor = 0.001;
  int batch_size = 64;
  std::uint64_t seed = 0;
  int max_epochs = 500;  // safety cap

  void validate() const;  // initial_lr > lr_floor > 0, batch_size >= 1, ...
};

// One hidden layer, sigmoid output. With hidden_dim == 0 the hidden layer
// disappears and w2 acts on the input directly (logistic regression).
struct FFNNModel {
  std::vector<double> w1;  // hidden_dim x input_dim, row-major
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // hidden_dim (input_dim when hidden_dim == 0)
  double b2 = 0.0;
  int input_dim = 0;
  FFNNConfig config;

  // sigmoid(w2 . act(w1 x + b1) + b2), clamped into (0, 1).
  double forward(std::span<const double> x) const;
};

struct Prediction {
  int label = 0;  // 1 iff probability >= 0.5
  double probability = 0.0;
};
Prediction predict(const FFNNModel& model, std::span<const double> x);

struct Gradients {
  std::vector<double> w1, b1, w2;
  double b2 = 0.0;
};

// Mean binary cross-entropy over the indexed rows; fills parameter gradients
// when grads is non-null.
double batch_loss(const FFNNModel& model,
                  std::span<const features::FeatureVector> data,
                  std::span<const std::size_t> indices,
                  Gradients* grads = nullptr);

struct EpochRecord {
  double train_loss = 0.0;
  double val_error = 0.0;  // 1 - accuracy on the internal validation split
  double lr = 0.0;         // rate used during this epoch
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;
  std::string stop_reason;   // "lr_floor" or "max_epochs"
  double final_lr = 0.0;     // rate after the last halving decision
  int best_epoch = 0;        // 1-based epoch of the returned snapshot
  double best_val_error = 1.0;
};

struct TrainResult {
  FFNNModel model;  // parameters of the best-validation-error epoch
  TrainingTrace trace;
};

// Mini-batch SGD on BCE with the halving schedule: a stratified 10%
// validation split is carved from `data` (seeded); after any epoch whose
// validation error strictly exceeds the best seen, the rate halves; training
// stops once it falls below lr_floor or max_epochs is reached. The returned
// model is the best-validation-error snapshot, ties going to the later epoch.
TrainResult train(std::span<const features::FeatureVector> data,
                  const FFNNConfig& config);

struct ConfigScore {
  FFNNConfig config;
  double validation_accuracy = 0.0;
};

struct GridResult {
  FFNNConfig best_config;
  TrainResult best;
  std::vector<ConfigScore> scores;
};

// All configs train on the same data with the same seed (hence the same
// validation split). Ties break toward the smaller hidden_dim, then the
// Activation enum order.
GridResult grid_search(std::span<const features::FeatureVector> data,
                       std::span<const FFNNConfig> grid, unsigned threads = 1);

// The 16 activation x hidden_dim combinations; lr/batch/seed copied from base.
std::vector<FFNNConfig> default_grid(const FFNNConfig& base);

// Versioned JSON serialization; doubles survive round-trips bit-exactly.
void save_model(const FFNNModel& model, const std::filesystem::path& path);
FFNNModel load_model(const std::filesystem::path& path);
std::string model_to_json(const FFNNModel& model);
FFNNModel model_from_json(std::string_view text);

}  // namespace cognate::classifier
