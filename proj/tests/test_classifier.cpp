#include "classifier.hpp"

#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "rng.hpp"
#include "support/tempdir.hpp"

using namespace cognate;
using classifier::Activation;
using classifier::FFNNConfig;
using classifier::FFNNModel;
using features::FeatureVector;

namespace {

FeatureVector row(std::vector<double> values, int label,
                  const std::string& id = "r") {
  return {"test", std::move(values), label, id};
}

FFNNModel zero_model(int input_dim, int hidden_dim, Activation act) {
  FFNNModel model;
  model.input_dim = input_dim;
  model.config.hidden_dim = hidden_dim;
  model.config.activation = act;
  if (hidden_dim == 0) {
    model.w2.assign(input_dim, 0.0);
  } else {
    model.w1.assign(static_cast<std::size_t>(hidden_dim) * input_dim, 0.0);
    model.b1.assign(hidden_dim, 0.0);
    model.w2.assign(hidden_dim, 0.0);
  }
  return model;
}

// Two seeded gaussian blobs around (-2,-2) and (2,2); the hand-fit boundary
// x + y = 0 must separate them before the data is considered usable.
std::vector<FeatureVector> blob_data(std::size_t per_class, double stddev,
                                     std::uint64_t seed) {
  rng::Engine eng(seed);
  std::vector<FeatureVector> data;
  for (std::size_t i = 0; i < per_class * 2; ++i) {
    const int label = i < per_class ? 0 : 1;
    const double cx = label == 0 ? -2.0 : 2.0;
    const double x = cx + rng::normal(eng, 0.0, stddev);
    const double y = cx + rng::normal(eng, 0.0, stddev);
    REQUIRE(((x + y > 0.0) == (label == 1)));
    data.push_back(row({x, y}, label, "b" + std::to_string(i)));
  }
  return data;
}

}  // namespace

TEST_CASE("forward") {
  SUBCASE("all-zero parameters give 0.5") {
    const auto model = zero_model(3, 4, Activation::Tanh);
    CHECK(model.forward(std::vector<double>{1.0, -2.0, 0.5}) == 0.5);
  }
  SUBCASE("logistic regression with zero weights gives 0.5") {
    const auto model = zero_model(3, 0, Activation::Tanh);
    CHECK(model.forward(std::vector<double>{1.0, -2.0, 0.5}) == 0.5);
  }
  SUBCASE("one-dimensional relu toy") {
    auto model = zero_model(1, 1, Activation::Relu);
    model.w1 = {1.0};
    model.w2 = {1.0};
    const double p = model.forward(std::vector<double>{2.0});
    CHECK(p == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch is an error") {
    const auto model = zero_model(3, 4, Activation::Tanh);
    CHECK_THROWS_AS((void)model.forward(std::vector<double>{1.0}), Error);
  }
  SUBCASE("output stays strictly inside (0,1)") {
    auto model = zero_model(1, 0, Activation::Tanh);
    model.w2 = {1000.0};
    CHECK(model.forward(std::vector<double>{100.0}) < 1.0);
    CHECK(model.forward(std::vector<double>{-100.0}) > 0.0);
  }
}

TEST_CASE("predict thresholds at 0.5 inclusive") {
  const auto neutral = zero_model(2, 2, Activation::Tanh);
  CHECK(classifier::predict(neutral, std::vector<double>{0.0, 0.0}).label == 1);

  auto low = zero_model(2, 0, Activation::Tanh);
  low.b2 = -2.0;
  CHECK(classifier::predict(low, std::vector<double>{0.0, 0.0}).label == 0);

  auto high = zero_model(2, 0, Activation::Tanh);
  high.b2 = 3.0;
  const auto pred = classifier::predict(high, std::vector<double>{0.0, 0.0});
  CHECK(pred.label == 1);
  CHECK(pred.probability == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))));
}

namespace {

// Hidden pre-activations of one sample under the current model.
std::vector<double> hidden_preacts(const FFNNModel& model,
                                   std::span<const double> x) {
  std::vector<double> z(model.config.hidden_dim);
  for (int j = 0; j < model.config.hidden_dim; ++j) {
    double s = model.b1[j];
    for (int i = 0; i < model.input_dim; ++i) {
      s += model.w1[static_cast<std::size_t>(j) * model.input_dim + i] * x[i];
    }
    z[j] = s;
  }
  return z;
}

bool near_kink(const FFNNModel& model,
               std::span<const FeatureVector> data) {
  for (const auto& sample : data) {
    for (const double z : hidden_preacts(model, sample.values)) {
      if (model.config.activation == Activation::Relu &&
          std::abs(z) < 0.05) {
        return true;
      }
      if (model.config.activation == Activation::HardTanh &&
          (std::abs(z - 1.0) < 0.05 || std::abs(z + 1.0) < 0.05)) {
        return true;
      }
    }
  }
  return false;
}

void check_gradients(Activation act, int instances, rng::Engine& eng) {
  constexpr double kStep = 1e-5;
  int checked = 0;
  while (checked < instances) {
    const int input_dim = 2 + static_cast<int>(rng::bounded(eng, 3));
    const int hidden = static_cast<int>(rng::bounded(eng, 4));  // 0 = LR
    FFNNModel model = zero_model(input_dim, hidden, act);
    for (auto& w : model.w1) w = rng::uniform(eng, -1.0, 1.0);
    for (auto& b : model.b1) b = rng::uniform(eng, -0.5, 0.5);
    for (auto& w : model.w2) w = rng::uniform(eng, -1.0, 1.0);
    model.b2 = rng::uniform(eng, -0.5, 0.5);

    std::vector<FeatureVector> data;
    for (int s = 0; s < 3; ++s) {
      std::vector<double> x(input_dim);
      for (auto& v : x) v = rng::uniform(eng, -1.5, 1.5);
      data.push_back(row(std::move(x), static_cast<int>(rng::bounded(eng, 2))));
    }
    if (hidden > 0 && near_kink(model, data)) continue;  // resample
    ++checked;

    const std::vector<std::size_t> indices = {0, 1, 2};
    classifier::Gradients grads;
    classifier::batch_loss(model, data, indices, &grads);

    const auto numeric = [&](double* param) {
      const double saved = *param;
      *param = saved + kStep;
      const double up = classifier::batch_loss(model, data, indices);
      *param = saved - kStep;
      const double down = classifier::batch_loss(model, data, indices);
      *param = saved;
      return (up - down) / (2.0 * kStep);
    };
    const auto agree = [](double analytic, double estimate) {
      const double scale =
          std::max({std::abs(analytic), std::abs(estimate), 1e-6});
      return std::abs(analytic - estimate) <= 1e-4 * scale ||
             std::abs(analytic - estimate) < 1e-8;
    };

    for (std::size_t i = 0; i < model.w1.size(); ++i) {
      CHECK(agree(grads.w1[i], numeric(&model.w1[i])));
    }
    for (std::size_t i = 0; i < model.b1.size(); ++i) {
      CHECK(agree(grads.b1[i], numeric(&model.b1[i])));
    }
    for (std::size_t i = 0; i < model.w2.size(); ++i) {
      CHECK(agree(grads.w2[i], numeric(&model.w2[i])));
    }
    CHECK(agree(grads.b2, numeric(&model.b2)));
  }
}

}  // namespace

TEST_CASE("analytic gradients match central differences") {
  rng::Engine eng(4242);
  check_gradients(Activation::Tanh, 12, eng);
  check_gradients(Activation::HardTanh, 12, eng);
  check_gradients(Activation::Sigmoid, 12, eng);
  check_gradients(Activation::Relu, 12, eng);
}

TEST_CASE("training separates the seeded blobs") {
  const auto data = blob_data(100, 0.5, 7);
  FFNNConfig config;
  config.hidden_dim = 30;
  config.activation = Activation::Tanh;
  config.seed = 7;
  config.max_epochs = 120;
  const auto result = classifier::train(data, config);

  std::size_t correct = 0;
  for (const auto& sample : data) {
    if (classifier::predict(result.model, sample.values).label ==
        sample.label) {
      ++correct;
    }
  }
  CHECK(correct == data.size());
  CHECK((result.trace.stop_reason == "lr_floor" ||
         result.trace.stop_reason == "max_epochs"));
}

TEST_CASE("learning rate only ever halves and stops at the floor") {
  // Label noise forces validation-error increases and therefore halvings.
  rng::Engine eng(55);
  std::vector<FeatureVector> data;
  for (int i = 0; i < 60; ++i) {
    data.push_back(row({rng::uniform(eng, -1, 1), rng::uniform(eng, -1, 1),
                        rng::uniform(eng, -1, 1)},
                       static_cast<int>(rng::bounded(eng, 2)),
                       "n" + std::to_string(i)));
  }
  FFNNConfig config;
  config.hidden_dim = 10;
  config.batch_size = 8;
  config.seed = 55;
  const auto result = classifier::train(data, config);
  const auto& trace = result.trace;

  double previous = config.initial_lr;
  for (const auto& epoch : trace.epochs) {
    CHECK((epoch.lr == previous || epoch.lr == previous / 2.0));
    // Every value is initial_lr / 2^k exactly.
    const double ratio = config.initial_lr / epoch.lr;
    CHECK(std::abs(ratio - std::round(ratio)) == 0.0);
    previous = epoch.lr;
  }
  if (trace.stop_reason == "lr_floor") {
    CHECK(trace.final_lr < config.lr_floor);
  } else {
    CHECK(trace.stop_reason == "max_epochs");
    CHECK(static_cast<int>(trace.epochs.size()) == config.max_epochs);
  }
}

TEST_CASE("single-class data is rejected") {
  std::vector<FeatureVector> data = {row({1.0}, 1), row({2.0}, 1),
                                     row({3.0}, 1)};
  FFNNConfig config;
  CHECK_THROWS_AS((void)classifier::train(data, config), Error);
}

TEST_CASE("training is bitwise deterministic for a fixed seed") {
  const auto data = blob_data(30, 0.6, 21);
  FFNNConfig config;
  config.hidden_dim = 15;
  config.activation = Activation::Relu;
  config.seed = 3;
  config.max_epochs = 40;

  const auto a = classifier::train(data, config);
  const auto b = classifier::train(data, config);
  REQUIRE(a.trace.epochs.size() == b.trace.epochs.size());
  for (std::size_t i = 0; i < a.trace.epochs.size(); ++i) {
    CHECK(a.trace.epochs[i].train_loss == b.trace.epochs[i].train_loss);
    CHECK(a.trace.epochs[i].val_error == b.trace.epochs[i].val_error);
    CHECK(a.trace.epochs[i].lr == b.trace.epochs[i].lr);
  }
  CHECK(a.model.w1 == b.model.w1);
  CHECK(a.model.w2 == b.model.w2);
  CHECK(a.model.b1 == b.model.b1);
  CHECK(a.model.b2 == b.model.b2);
}

TEST_CASE("grid search") {
  const auto data = blob_data(40, 0.5, 9);

  SUBCASE("single-config grid returns that config") {
    FFNNConfig only;
    only.hidden_dim = 30;
    only.activation = Activation::Sigmoid;
    only.seed = 1;
    only.max_epochs = 30;
    const auto result = classifier::grid_search(data, {&only, 1});
    CHECK(result.best_config.hidden_dim == 30);
    CHECK(result.best_config.activation == Activation::Sigmoid);
    CHECK(result.scores.size() == 1);
  }

  SUBCASE("ties break toward the smaller hidden dim") {
    // Easily separable data: both configs reach validation accuracy 1.
    FFNNConfig base;
    base.seed = 1;
    base.max_epochs = 40;
    std::vector<FFNNConfig> grid(2, base);
    grid[0].hidden_dim = 100;
    grid[1].hidden_dim = 30;
    const auto result = classifier::grid_search(data, grid);
    REQUIRE(result.scores[0].validation_accuracy ==
            result.scores[1].validation_accuracy);
    CHECK(result.best_config.hidden_dim == 30);
  }

  SUBCASE("empty grid is rejected") {
    CHECK_THROWS_AS((void)classifier::grid_search(data, {}), Error);
  }

  SUBCASE("worker exceptions surface from threaded searches") {
    std::vector<FeatureVector> one_class = {row({1.0}, 1), row({2.0}, 1),
                                            row({3.0}, 1)};
    FFNNConfig base;
    const auto grid = classifier::default_grid(base);
    CHECK_THROWS_AS((void)classifier::grid_search(one_class, grid, 4), Error);
  }

  SUBCASE("thread count does not change the outcome") {
    FFNNConfig base;
    base.seed = 2;
    base.max_epochs = 25;
    const auto grid = classifier::default_grid(base);
    const auto serial = classifier::grid_search(data, grid, 1);
    const auto threaded = classifier::grid_search(data, grid, 4);
    CHECK(serial.best_config.hidden_dim == threaded.best_config.hidden_dim);
    CHECK(serial.best_config.activation == threaded.best_config.activation);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(serial.scores[i].validation_accuracy ==
            threaded.scores[i].validation_accuracy);
    }
  }
}

TEST_CASE("default grid is the 4x4 activation by width product") {
  FFNNConfig base;
  base.seed = 11;
  const auto grid = classifier::default_grid(base);
  CHECK(grid.size() == 16);
  for (const auto& config : grid) {
    CHECK(config.seed == 11);
  }
}

TEST_CASE("model serialization round-trips bit-exactly") {
  const auto data = blob_data(20, 0.5, 31);
  FFNNConfig config;
  config.hidden_dim = 5;
  config.activation = Activation::HardTanh;
  config.seed = 31;
  config.max_epochs = 10;
  const auto trained = classifier::train(data, config);

  testutil::TempDir tmp;
  const auto path = tmp.path() / "model.json";
  classifier::save_model(trained.model, path);
  const auto loaded = classifier::load_model(path);

  CHECK(loaded.input_dim == trained.model.input_dim);
  CHECK(loaded.config.hidden_dim == config.hidden_dim);
  CHECK(loaded.config.activation == config.activation);
  CHECK(loaded.w1 == trained.model.w1);  // bit-exact doubles
  CHECK(loaded.b1 == trained.model.b1);
  CHECK(loaded.w2 == trained.model.w2);
  CHECK(loaded.b2 == trained.model.b2);

  CHECK_THROWS_AS(classifier::load_model(tmp.path() / "missing.json"), Error);
  const auto junk = tmp.write("junk.json", "{\"format\": \"other\"}");
  CHECK_THROWS_AS(classifier::load_model(junk), Error);
}

TEST_CASE("config validation") {
  FFNNConfig config;
  config.initial_lr = 0.0005;  // below the floor
  CHECK_THROWS_AS(config.validate(), Error);
  config = FFNNConfig{};
  config.batch_size = 0;
  CHECK_THROWS_AS(config.validate(), Error);
  config = FFNNConfig{};
  config.hidden_dim = -1;
  CHECK_THROWS_AS(config.validate(), Error);
}
