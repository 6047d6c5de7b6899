#include "classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace cognate::classifier {

namespace {

constexpr double kProbEps = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::HardTanh:
      return std::clamp(z, -1.0, 1.0);
    case Activation::Sigmoid:
      return sigmoid(z);
    case Activation::Relu:
      return z > 0.0 ? z : 0.0;
  }
  return z;
}

// Derivative in terms of pre-activation z and activation value a.
// Subgradient at the hardtanh/relu kinks is 0.
double activate_grad(Activation act, double z, double a) {
  switch (act) {
    case Activation::Tanh:
      return 1.0 - a * a;
    case Activation::HardTanh:
      return (z > -1.0 && z < 1.0) ? 1.0 : 0.0;
    case Activation::Sigmoid:
      return a * (1.0 - a);
    case Activation::Relu:
      return z > 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

const char* activation_name(Activation activation) {
  switch (activation) {
    case Activation::Tanh:
      return "tanh";
    case Activation::HardTanh:
      return "hardtanh";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Relu:
      return "relu";
  }
  return "?";
}

std::optional<Activation> activation_from_name(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "hardtanh") return Activation::HardTanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "relu") return Activation::Relu;
  return std::nullopt;
}

void FFNNConfig::validate() const {
  if (hidden_dim < 0) {
    raise(ErrorCode::InvalidArgument, "hidden_dim must be >= 0");
  }
  if (!(initial_lr > lr_floor) || !(lr_floor > 0.0)) {
    raise(ErrorCode::InvalidArgument,
          "learning rates must satisfy initial_lr > lr_floor > 0");
  }
  if (batch_size < 1) {
    raise(ErrorCode::InvalidArgument, "batch_size must be >= 1");
  }
  if (max_epochs < 1) {
    raise(ErrorCode::InvalidArgument, "max_epochs must be >= 1");
  }
}

double FFNNModel::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim) {
    raise(ErrorCode::InvalidArgument,
          "forward: expected input of dimension " + std::to_string(input_dim) +
              ", got " + std::to_string(x.size()));
  }
  double z2 = b2;
  if (config.hidden_dim == 0) {
    for (int i = 0; i < input_dim; ++i) z2 += w2[i] * x[i];
  } else {
    const int h = config.hidden_dim;
    for (int j = 0; j < h; ++j) {
      double z1 = b1[j];
      const double* row = w1.data() + static_cast<std::size_t>(j) * input_dim;
      for (int i = 0; i < input_dim; ++i) z1 += row[i] * x[i];
      z2 += w2[j] * activate(config.activation, z1);
    }
  }
  return std::clamp(sigmoid(z2), kProbEps, 1.0 - kProbEps);
}

Prediction predict(const FFNNModel& model, std::span<const double> x) {
  const double p = model.forward(x);
  return {p >= 0.5 ? 1 : 0, p};
}

double batch_loss(const FFNNModel& model,
                  std::span<const features::FeatureVector> data,
                  std::span<const std::size_t> indices, Gradients* grads) {
  const int input_dim = model.input_dim;
  const int h = model.config.hidden_dim;
  if (grads) {
    grads->w1.assign(model.w1.size(), 0.0);
    grads->b1.assign(model.b1.size(), 0.0);
    grads->w2.assign(model.w2.size(), 0.0);
    grads->b2 = 0.0;
  }
  std::vector<double> z1(static_cast<std::size_t>(std::max(h, 0)));
  std::vector<double> a1(z1.size());
  double loss_sum = 0.0;
  const double scale = 1.0 / static_cast<double>(indices.size());

  for (const std::size_t row : indices) {
    const auto& sample = data[row];
    const std::span<const double> x(sample.values);
    const double y = sample.label;

    double z2 = model.b2;
    if (h == 0) {
      for (int i = 0; i < input_dim; ++i) z2 += model.w2[i] * x[i];
    } else {
      for (int j = 0; j < h; ++j) {
        double z = model.b1[j];
        const double* w_row =
            model.w1.data() + static_cast<std::size_t>(j) * input_dim;
        for (int i = 0; i < input_dim; ++i) z += w_row[i] * x[i];
        z1[j] = z;
        a1[j] = activate(model.config.activation, z);
        z2 += model.w2[j] * a1[j];
      }
    }
    const double p = std::clamp(sigmoid(z2), kProbEps, 1.0 - kProbEps);
    loss_sum += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));

    if (grads) {
      const double dz2 = (p - y) * scale;
      grads->b2 += dz2;
      if (h == 0) {
        for (int i = 0; i < input_dim; ++i) grads->w2[i] += dz2 * x[i];
      } else {
        for (int j = 0; j < h; ++j) {
          grads->w2[j] += dz2 * a1[j];
          const double dz1 =
              dz2 * model.w2[j] *
              activate_grad(model.config.activation, z1[j], a1[j]);
          if (dz1 == 0.0) continue;
          grads->b1[j] += dz1;
          double* g_row =
              grads->w1.data() + static_cast<std::size_t>(j) * input_dim;
          for (int i = 0; i < input_dim; ++i) g_row[i] += dz1 * x[i];
        }
      }
    }
  }
  return loss_sum * scale;
}

namespace {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Stratified 10% validation carve-out, at least one row per class.
Split validation_split(std::span<const features::FeatureVector> data,
                       rng::Engine& eng) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[data[i].label == 1 ? 1 : 0].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2) {
      raise(ErrorCode::InvalidArgument,
            "training needs at least 2 examples per class, class " +
                std::to_string(c) + " has " +
                std::to_string(by_class[c].size()));
    }
  }
  Split split;
  for (auto& members : by_class) {
    rng::shuffle(members, eng);
    std::size_t n_val = std::max<std::size_t>(1, members.size() / 10);
    n_val = std::min(n_val, members.size() - 1);
    split.validation.insert(split.validation.end(), members.begin(),
                            members.begin() + n_val);
    split.train.insert(split.train.end(), members.begin() + n_val,
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

void init_params(FFNNModel& model, rng::Engine& eng) {
  const int h = model.config.hidden_dim;
  const int in = model.input_dim;
  if (h == 0) {
    model.w1.clear();
    model.b1.clear();
    model.w2.assign(static_cast<std::size_t>(in), 0.0);
    const double bound = std::sqrt(6.0 / (in + 1));
    for (double& w : model.w2) w = rng::uniform(eng, -bound, bound);
  } else {
    model.w1.assign(static_cast<std::size_t>(h) * in, 0.0);
    model.b1.assign(static_cast<std::size_t>(h), 0.0);
    model.w2.assign(static_cast<std::size_t>(h), 0.0);
    const double bound1 = std::sqrt(6.0 / (in + h));
    for (double& w : model.w1) w = rng::uniform(eng, -bound1, bound1);
    const double bound2 = std::sqrt(6.0 / (h + 1));
    for (double& w : model.w2) w = rng::uniform(eng, -bound2, bound2);
  }
  model.b2 = 0.0;
}

double validation_error(const FFNNModel& model,
                        std::span<const features::FeatureVector> data,
                        std::span<const std::size_t> indices) {
  std::size_t wrong = 0;
  for (const std::size_t i : indices) {
    const int label = model.forward(data[i].values) >= 0.5 ? 1 : 0;
    if (label != data[i].label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(indices.size());
}

}  // namespace

TrainResult train(std::span<const features::FeatureVector> data,
                  const FFNNConfig& config) {
  config.validate();
  if (data.empty()) {
    raise(ErrorCode::InvalidArgument, "train: empty dataset");
  }
  const int input_dim = static_cast<int>(data[0].values.size());
  for (const auto& row : data) {
    if (static_cast<int>(row.values.size()) != input_dim) {
      raise(ErrorCode::InvalidArgument,
            "train: inconsistent feature dimensions (pair " + row.pair_id +
                ")");
    }
  }

  rng::Engine eng(config.seed);
  const Split split = validation_split(data, eng);

  TrainResult result;
  FFNNModel& model = result.model;
  model.config = config;
  model.input_dim = input_dim;
  init_params(model, eng);

  FFNNModel best = model;
  TrainingTrace& trace = result.trace;
  trace.best_val_error = std::numeric_limits<double>::infinity();

  double lr = config.initial_lr;
  std::vector<std::size_t> order = split.train;
  Gradients grads;
  trace.stop_reason = "max_epochs";

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng::shuffle(order, eng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t count = std::min<std::size_t>(
          config.batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, count);
      const double loss = batch_loss(model, data, batch, &grads);
      if (!std::isfinite(loss)) {
        raise(ErrorCode::Internal,
              "non-finite training loss at epoch " + std::to_string(epoch) +
                  ", batch offset " + std::to_string(start) + " (lr " +
                  std::to_string(lr) + ")");
      }
      loss_sum += loss * static_cast<double>(count);
      for (std::size_t i = 0; i < model.w1.size(); ++i) {
        model.w1[i] -= lr * grads.w1[i];
      }
      for (std::size_t i = 0; i < model.b1.size(); ++i) {
        model.b1[i] -= lr * grads.b1[i];
      }
      for (std::size_t i = 0; i < model.w2.size(); ++i) {
        model.w2[i] -= lr * grads.w2[i];
      }
      model.b2 -= lr * grads.b2;
    }

    const double val_error = validation_error(model, data, split.validation);
    trace.epochs.push_back(
        {loss_sum / static_cast<double>(order.size()), val_error, lr});

    if (val_error <= trace.best_val_error) {
      // Ties go to the later epoch: more training at equal validation error.
      trace.best_val_error = val_error;
      trace.best_epoch = epoch;
      best = model;
    } else {
      lr *= 0.5;  // halve on strict degradation versus the best seen
    }
    if (lr < config.lr_floor) {
      trace.stop_reason = "lr_floor";
      break;
    }
  }
  trace.final_lr = lr;
  result.model = std::move(best);
  return result;
}

GridResult grid_search(std::span<const features::FeatureVector> data,
                       std::span<const FFNNConfig> grid, unsigned threads) {
  if (grid.empty()) {
    raise(ErrorCode::InvalidArgument, "grid_search: empty grid");
  }
  std::vector<TrainResult> results(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { results[i] = train(data, grid[i]); });

  GridResult out;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double accuracy = 1.0 - results[i].trace.best_val_error;
    out.scores.push_back({grid[i], accuracy});
    if (i == 0) continue;
    const auto& cur = out.scores[i];
    const auto& best = out.scores[best_index];
    const auto key = [](const ConfigScore& s) {
      return std::make_tuple(-s.validation_accuracy, s.config.hidden_dim,
                             static_cast<int>(s.config.activation));
    };
    if (key(cur) < key(best)) best_index = i;
  }
  out.best_config = grid[best_index];
  out.best = std::move(results[best_index]);
  return out;
}

std::vector<FFNNConfig> default_grid(const FFNNConfig& base) {
  std::vector<FFNNConfig> grid;
  for (const int hidden : {30, 50, 100, 150}) {
    for (const Activation act : {Activation::Tanh, Activation::HardTanh,
                                 Activation::Sigmoid, Activation::Relu}) {
      FFNNConfig config = base;
      config.hidden_dim = hidden;
      config.activation = act;
      grid.push_back(config);
    }
  }
  return grid;
}

namespace {

nlohmann::json config_to_json(const FFNNConfig& config) {
  return {{"hidden_dim", config.hidden_dim},
          {"activation", activation_name(config.activation)},
          {"initial_lr", config.initial_lr},
          {"lr_floor", config.lr_floor},
          {"batch_size", config.batch_size},
          {"seed", config.seed},
          {"max_epochs", config.max_epochs}};
}

FFNNConfig config_from_json(const nlohmann::json& j) {
  FFNNConfig config;
  config.hidden_dim = j.at("hidden_dim").get<int>();
  const auto act = activation_from_name(j.at("activation").get<std::string>());
  if (!act) {
    raise(ErrorCode::Parse,
          "unknown activation '" + j.at("activation").get<std::string>() +
              "'");
  }
  config.activation = *act;
  config.initial_lr = j.at("initial_lr").get<double>();
  config.lr_floor = j.at("lr_floor").get<double>();
  config.batch_size = j.at("batch_size").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.max_epochs = j.at("max_epochs").get<int>();
  return config;
}

}  // namespace

std::string model_to_json(const FFNNModel& model) {
  const nlohmann::json j = {{"format", "cognate-ffnn"},
                            {"version", 1},
                            {"input_dim", model.input_dim},
                            {"config", config_to_json(model.config)},
                            {"w1", model.w1},
                            {"b1", model.b1},
                            {"w2", model.w2},
                            {"b2", model.b2}};
  return j.dump(2);
}

FFNNModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::Parse, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "cognate-ffnn" ||
        j.at("version").get<int>() != 1) {
      raise(ErrorCode::Parse, "unsupported model format/version");
    }
    FFNNModel model;
    model.input_dim = j.at("input_dim").get<int>();
    model.config = config_from_json(j.at("config"));
    model.w1 = j.at("w1").get<std::vector<double>>();
    model.b1 = j.at("b1").get<std::vector<double>>();
    model.w2 = j.at("w2").get<std::vector<double>>();
    model.b2 = j.at("b2").get<double>();
    const std::size_t h = static_cast<std::size_t>(model.config.hidden_dim);
    const std::size_t expect_w2 =
        h == 0 ? static_cast<std::size_t>(model.input_dim) : h;
    if (model.w1.size() != h * model.input_dim || model.b1.size() != h ||
        model.w2.size() != expect_w2) {
      raise(ErrorCode::Parse, "model parameter shapes are inconsistent");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::Parse, std::string("model JSON: ") + e.what());
  }
}

void save_model(const FFNNModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write model: " + path.string());
  out << model_to_json(model) << '\n';
}

FFNNModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open model: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace cognate::classifier
