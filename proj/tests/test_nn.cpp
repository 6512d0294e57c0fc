// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gem/gem.hpp"

namespace gem::nn {
namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = scale * rng.normal();
  return m;
}

double loss_of(const Network& net, const Matrix& x, const std::vector<int>& y) {
  return softmax_cross_entropy(forward(net, x), y).loss;
}

/// Largest relative error between backprop and Richardson-extrapolated
/// central differences over every parameter. Magnitudes below 1e-6 are
/// compared on that absolute scale, since the loss is O(1).
double gradcheck(Network& net, const Matrix& x, const std::vector<int>& y) {
  Tape tape;
  const LossResult res = softmax_cross_entropy(forward(net, x, &tape), y);
  const ParamGrads grads = backward(net, tape, res.grad_logits);
  double worst = 0;
  auto params = parameters(net);
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (std::size_t i = 0; i < params[k].size(); ++i) {
      double& p = params[k][i];
      const double saved = p;
      const double numeric = verify::finite_diff(
          [&](double v) {
            p = v;
            return loss_of(net, x, y);
          },
          saved, {1, 1e-3, 2});
      p = saved;
      const double analytic = grads[k][i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

std::vector<int> random_labels(std::size_t n, int classes, Rng& rng) {
  std::vector<int> y(n);
  for (auto& v : y) v = static_cast<int>(rng.index(static_cast<std::size_t>(classes)));
  return y;
}

TEST(Forward, IdentityNetworkPassesInputThrough) {
  Network net;
  DenseLayer layer{Matrix(3, 3), std::vector<double>(3, 0.0), std::nullopt};
  for (std::size_t i = 0; i < 3; ++i) layer.weights(i, i) = 1;
  net.layers.emplace_back(layer);
  Rng rng(1);
  const Matrix x = random_matrix(4, 3, rng);
  EXPECT_EQ(forward(net, x), x);
}

TEST(Forward, SingleGemNeuron) {
  Network net;
  net.layers.emplace_back(DenseLayer{Matrix(1, 1, 1.0), {0.0}, ActivationSpec{Gem{SmoothnessOrder(1)}}});
  EXPECT_EQ(forward(net, Matrix(1, 1, 1.0))(0, 0), 0.5);
}

TEST(Forward, TwoLayerHandComputed) {
  // Layer 1: W = [[1, -1], [0.5, 2]], b = [0, 1], Gem(N=1).
  // Layer 2: W = [[1, 1], [2, -1]], b = [0.5, 0], identity.
  Network net;
  Matrix w1(2, 2);
  w1(0, 0) = 1, w1(0, 1) = -1, w1(1, 0) = 0.5, w1(1, 1) = 2;
  Matrix w2(2, 2);
  w2(0, 0) = 1, w2(0, 1) = 1, w2(1, 0) = 2, w2(1, 1) = -1;
  net.layers.emplace_back(DenseLayer{w1, {0.0, 1.0}, ActivationSpec{Gem{SmoothnessOrder(1)}}});
  net.layers.emplace_back(DenseLayer{w2, {0.5, 0.0}, std::nullopt});
  Matrix x(2, 2);
  x(0, 0) = 2, x(0, 1) = 1, x(1, 0) = -1, x(1, 1) = 0;
  // Row 0: z = [1, 4] → β = [1/2, 64/17]; row 1: z = [-1, 0.5] → β = [0, 0.125/1.25 = 0.1].
  const Matrix out = forward(net, x);
  EXPECT_NEAR(out(0, 0), 0.5 + 64.0 / 17 + 0.5, 1e-15);
  EXPECT_NEAR(out(0, 1), 1.0 - 64.0 / 17, 1e-15);
  EXPECT_NEAR(out(1, 0), 0.1 + 0.5, 1e-15);
  EXPECT_NEAR(out(1, 1), -0.1, 1e-15);
}

TEST(Forward, DimensionMismatchThrows) {
  Rng rng(2);
  Network net = make_mlp(3, 4, 1, 2, Gem{}, 1);
  EXPECT_THROW(forward(net, random_matrix(2, 5, rng)), std::invalid_argument);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  Rng rng(3);
  Network net = make_mlp(3, 5, 2, 2, Silu{}, 4);
  Tape tape;
  const Matrix logits = forward(net, random_matrix(6, 3, rng), &tape);
  for (const auto& g : backward(net, tape, Matrix(logits.rows(), logits.cols()))) {
    for (double v : g) EXPECT_EQ(v, 0.0);
  }
}

TEST(Backward, OneParameterQuadratic) {
  // y = w·x + b, L = ½(y - t)²: ∂L/∂w = (y - t)x, ∂L/∂b = y - t.
  Network net;
  net.layers.emplace_back(DenseLayer{Matrix(1, 1, 1.5), {0.25}, std::nullopt});
  Tape tape;
  const Matrix y = forward(net, Matrix(1, 1, 2.0), &tape);
  const double residual = y(0, 0) - 1.0;
  const ParamGrads g = backward(net, tape, Matrix(1, 1, residual));
  EXPECT_DOUBLE_EQ(g[0][0], 2.25 * 2.0);
  EXPECT_DOUBLE_EQ(g[1][0], 2.25);
}

TEST(Backward, StaleTapeRejected) {
  Rng rng(5);
  Network net = make_mlp(2, 3, 1, 2, Gem{}, 6);
  const Matrix x = random_matrix(4, 2, rng);
  const std::vector<int> y = {0, 1, 0, 1};
  Tape tape;
  const LossResult res = softmax_cross_entropy(forward(net, x, &tape), y);
  Optimizer opt(SgdMomentum{}, net);
  opt.step(net, backward(net, tape, res.grad_logits), 0.1);
  EXPECT_THROW(backward(net, tape, res.grad_logits), std::logic_error);
}

TEST(Backward, GradcheckThreeLayerGemN2) {
  Rng rng(7);
  Network net = make_mlp(3, 5, 2, 2, Gem{SmoothnessOrder(2)}, 8);
  ASSERT_LE(parameter_count(net), 200U);
  for (auto p : parameters(net)) {
    for (double& v : p) v = rng.normal();
  }
  const Matrix x = random_matrix(5, 3, rng);
  EXPECT_LT(gradcheck(net, x, random_labels(5, 2, rng)), 1e-4);
}

class GradcheckEverySpec : public ::testing::TestWithParam<std::string> {};

TEST_P(GradcheckEverySpec, BackpropMatchesFiniteDifferences) {
  const ActivationSpec spec = parse_spec(GetParam());
  Rng rng(11);
  Network net = make_mlp(3, 8, 2, 2, spec, 12);
  ASSERT_LE(parameter_count(net), 200U);
  for (auto p : parameters(net)) {
    for (double& v : p) v = 0.8 * rng.normal();
  }
  const Matrix x = random_matrix(6, 3, rng);
  EXPECT_LT(gradcheck(net, x, random_labels(6, 2, rng)), 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Specs, GradcheckEverySpec,
                         ::testing::Values("relu", "silu", "gelu", "gelu_tanh", "gem:n=1", "gem:n=3",
                                           "egem:n=1,eps=0.1", "egem:n=2,eps=10", "segem:n=1,eps=1",
                                           "segem:n=2,eps=0.5"),
                         [](const auto& info) {
                           std::string name = info.param;
                           for (char& c : name) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return name;
                         });

TEST(Gmglu, Examples) {
  GmgluLayer layer{Matrix(1, 1, 1.0), Matrix(1, 1, 0.0), SmoothnessOrder(1)};
  EXPECT_EQ(gmglu_forward(layer, Matrix(1, 1, 1.0))(0, 0), 0.0);
  layer.v = Matrix(1, 1, 2.0);
  EXPECT_EQ(gmglu_forward(layer, Matrix(1, 1, 1.0))(0, 0), 1.0);
}

TEST(Gmglu, AllOnesLinearBranchReducesToGemLayer) {
  Rng rng(13);
  GmgluLayer layer{random_matrix(4, 3, rng), Matrix(4, 3, 0.0), SmoothnessOrder(2)};
  // xVᵀ ≡ 1 when every input row sums to 1 and V is all ones; use a bias-free
  // construction by appending a constant column instead.
  Matrix x = random_matrix(5, 3, rng);
  for (std::size_t r = 0; r < x.rows(); ++r) x(r, 2) = 1.0;
  for (std::size_t h = 0; h < 4; ++h) layer.v(h, 2) = 1.0;
  const Matrix gated = gmglu_forward(layer, x);
  DenseLayer dense{layer.w, std::vector<double>(4, 0.0), ActivationSpec{Gem{SmoothnessOrder(2)}}};
  Network net;
  net.layers.emplace_back(dense);
  EXPECT_EQ(gated, forward(net, x));
}

TEST(Gmglu, Gradcheck) {
  Rng rng(14);
  Network net;
  Rng init(15);
  net.layers.emplace_back(make_gmglu(3, 6, SmoothnessOrder(2), init));
  net.layers.emplace_back(make_dense(6, 2, std::nullopt, init));
  ASSERT_LE(parameter_count(net), 200U);
  const Matrix x = random_matrix(6, 3, rng);
  EXPECT_LT(gradcheck(net, x, random_labels(6, 2, rng)), 1e-4);
}

TEST(Gmglu, ShapeMismatchThrows) {
  Rng rng(16);
  GmgluLayer layer{Matrix(2, 3), Matrix(2, 3), SmoothnessOrder(1)};
  EXPECT_THROW(gmglu_forward(layer, random_matrix(2, 4, rng)), std::invalid_argument);
}

TEST(Init, KaimingUniformBounds) {
  Network net = make_mlp(50, 20, 1, 3, Gem{}, 3);
  const auto& first = std::get<DenseLayer>(net.layers[0]);
  const double bound = std::sqrt(3.0 / 50);
  for (double w : first.weights.data()) {
    EXPECT_LE(std::abs(w), bound);
  }
  for (double b : first.bias) EXPECT_EQ(b, 0.0);
  Network shifted = make_mlp(50, 20, 2, 3, Gem{}, 3, 0.5);
  EXPECT_EQ(std::get<DenseLayer>(shifted.layers[1]).bias[0], 0.5);
  EXPECT_EQ(std::get<DenseLayer>(shifted.layers[2]).bias[0], 0.0);
  EXPECT_EQ(std::get<DenseLayer>(shifted.layers[0]).weights, first.weights);
}

TEST(Loss, SoftmaxCrossEntropy) {
  Matrix logits(1, 2);
  logits(0, 0) = 1000, logits(0, 1) = 0;
  auto r = softmax_cross_entropy(logits, std::vector<int>{1});
  EXPECT_NEAR(r.loss, 1000.0, 1e-9);
  EXPECT_EQ(r.correct, 0U);
  r = softmax_cross_entropy(Matrix(2, 3), std::vector<int>{0, 2});
  EXPECT_NEAR(r.loss, std::log(3.0), 1e-15);
  EXPECT_NEAR(r.grad_logits(0, 0), (1.0 / 3 - 1) / 2, 1e-15);
  EXPECT_THROW(softmax_cross_entropy(Matrix(1, 2), std::vector<int>{2}), std::invalid_argument);
}

TEST(Optim, ValidationAndSchedules) {
  EXPECT_THROW(validate(OptimizerConfig{SgdMomentum{0.0}}), std::invalid_argument);
  EXPECT_THROW(validate(OptimizerConfig{SgdMomentum{0.1, 1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(OptimizerConfig{AdamW{1e-3, 1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(ScheduleConfig{MultiStepSchedule{{10}, 0.0}}), std::invalid_argument);
  EXPECT_THROW(validate(ScheduleConfig{MultiStepSchedule{{10}, 1.5}}), std::invalid_argument);
  const ScheduleConfig ms = MultiStepSchedule{{2, 4}, 0.1};
  EXPECT_DOUBLE_EQ(scheduled_lr(1.0, ms, 1, 0, 100), 1.0);
  EXPECT_DOUBLE_EQ(scheduled_lr(1.0, ms, 2, 0, 100), 0.1);
  EXPECT_NEAR(scheduled_lr(1.0, ms, 5, 0, 100), 0.01, 1e-15);
  const ScheduleConfig cos = CosineSchedule{10};
  EXPECT_DOUBLE_EQ(scheduled_lr(1.0, cos, 0, 0, 110), 0.1);
  EXPECT_DOUBLE_EQ(scheduled_lr(1.0, cos, 0, 10, 110), 1.0);
  EXPECT_NEAR(scheduled_lr(1.0, cos, 0, 60, 110), 0.5, 1e-15);
}

TEST(Optim, SgdAndAdamWSteps) {
  Network net;
  net.layers.emplace_back(DenseLayer{Matrix(1, 1, 1.0), {0.0}, std::nullopt});
  Optimizer sgd(SgdMomentum{0.1, 0.5, 0.0}, net);
  sgd.step(net, {{2.0}, {0.0}}, 0.1);
  EXPECT_DOUBLE_EQ(std::get<DenseLayer>(net.layers[0]).weights(0, 0), 1.0 - 0.2);
  sgd.step(net, {{2.0}, {0.0}}, 0.1);
  EXPECT_DOUBLE_EQ(std::get<DenseLayer>(net.layers[0]).weights(0, 0), 0.8 - 0.1 * 3.0);
  EXPECT_EQ(net.version, 2U);

  Network net2;
  net2.layers.emplace_back(DenseLayer{Matrix(1, 1, 1.0), {0.0}, std::nullopt});
  Optimizer adam(AdamW{0.01, 0.9, 0.999, 0.0}, net2);
  adam.step(net2, {{123.0}, {-4.0}}, 0.01);
  // First bias-corrected step moves each parameter by lr·sign(g).
  EXPECT_NEAR(std::get<DenseLayer>(net2.layers[0]).weights(0, 0), 0.99, 1e-9);
  EXPECT_NEAR(std::get<DenseLayer>(net2.layers[0]).bias[0], 0.01, 1e-9);
}

TEST(Data, SyntheticDeterministicAndShaped) {
  const Dataset a = make_synthetic(SyntheticKind::Spirals, 50, 0.1, 9);
  const Dataset b = make_synthetic(SyntheticKind::Spirals, 50, 0.1, 9);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.size(), 100U);
  EXPECT_EQ(a.classes, 2);
  EXPECT_THROW(make_synthetic(SyntheticKind::Blobs, 0, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(make_synthetic(SyntheticKind::Blobs, 3, -1, 1), std::invalid_argument);
}

TEST(Data, NoiselessBlobsSeparableByHyperplane) {
  const Dataset d = make_synthetic(SyntheticKind::Blobs, 40, 0.0, 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double side = d.features(i, 0) + d.features(i, 1);
    EXPECT_EQ(side > 0 ? 1 : 0, d.labels[i]);
  }
}

TrainConfig quick_config(std::size_t epochs, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.seed = seed;
  return cfg;
}

TEST(Train, ZeroEpochsReportsInitialState) {
  const Dataset d = make_synthetic(SyntheticKind::Blobs, 10, 0.2, 1);
  Network net = make_mlp(2, 4, 1, 2, Gem{}, 1);
  const TrainReport r = train(net, d, d, quick_config(0, 1));
  ASSERT_EQ(r.rows.size(), 1U);
  EXPECT_EQ(r.rows[0].epoch, 0U);
  EXPECT_FALSE(r.diverged);
}

TEST(Train, RejectsBadInput) {
  const Dataset empty{Matrix(0, 2), {}, 2};
  Network net = make_mlp(2, 4, 1, 2, Gem{}, 1);
  EXPECT_THROW(train(net, empty, empty, quick_config(1, 1)), std::invalid_argument);
  Dataset bad = make_synthetic(SyntheticKind::Blobs, 2, 0.1, 1);
  bad.labels[0] = 5;
  EXPECT_THROW(train(net, bad, bad, quick_config(1, 1)), std::invalid_argument);
}

TEST(Train, BlobsWithOneGemLayer) {
  const Dataset tr = make_synthetic(SyntheticKind::Blobs, 100, 0.4, 2);
  const Dataset va = make_synthetic(SyntheticKind::Blobs, 100, 0.4, 3);
  Network net = make_mlp(2, 16, 1, 2, Gem{SmoothnessOrder(1)}, 4);
  const TrainReport r = train(net, tr, va, quick_config(50, 5));
  EXPECT_GT(r.final_row().val_acc, 0.95);
}

TEST(Train, SpiralsNeedNonlinearity) {
  const Dataset tr = make_synthetic(SyntheticKind::Spirals, 200, 0.05, 44);
  const Dataset va = make_synthetic(SyntheticKind::Spirals, 200, 0.05, 45);
  Network linear = make_mlp(2, 1, 0, 2, Gem{}, 43);
  ASSERT_EQ(linear.layers.size(), 1U);
  const TrainReport lin = train(linear, tr, va, quick_config(100, 42));
  EXPECT_LT(lin.final_row().train_acc, 0.7);

  ExperimentConfig cfg = parse_experiment_config("seed = 42\n");
  const TrainReport deep = run_experiment(cfg);
  EXPECT_GT(deep.final_row().val_acc, 0.9);
}

TEST(Train, DivergenceIsFlaggedNotThrown) {
  const Dataset d = make_synthetic(SyntheticKind::Blobs, 20, 0.3, 1);
  Network net = make_mlp(2, 8, 0, 2, Relu{}, 2);
  TrainConfig cfg = quick_config(20, 3);
  cfg.optimizer = SgdMomentum{1e308, 0.9, 0.0};
  const TrainReport r = train(net, d, d, cfg);
  EXPECT_TRUE(r.diverged);
  EXPECT_TRUE(std::isnan(r.final_row().train_loss));
  EXPECT_EQ(r.final_row().epoch, r.diverged_epoch);
}

TEST(Train, DeterministicCsv) {
  ExperimentConfig cfg = parse_experiment_config("epochs = 5\nn_per_class = 30\nactivation = segem:n=2,eps=0.5\n");
  std::ostringstream a;
  std::ostringstream b;
  write_train_csv(a, run_experiment(cfg));
  write_train_csv(b, run_experiment(cfg));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("epoch,train_loss,train_acc,val_acc,lr,elapsed_s\n", 0), 0U);
  EXPECT_NE(a.str().find("\n5,"), std::string::npos);
}

TEST(Config, ParsesKeysAndComments) {
  const ExperimentConfig cfg = parse_experiment_config(
      "# recipe\n"
      "optimizer = adamw   # trailing comment\n"
      "lr = 0.003\n"
      "weight_decay = 0\n"
      "schedule = multistep\n"
      "milestones = 10, 20\n"
      "gamma = 0.5\n"
      "activation = egem:n=2,eps=0.01\n"
      "\n"
      "depth = 3\n");
  const auto& adam = std::get<AdamW>(cfg.train.optimizer);
  EXPECT_EQ(adam.lr, 0.003);
  EXPECT_EQ(adam.weight_decay, 0.0);
  const auto& ms = std::get<MultiStepSchedule>(cfg.train.schedule);
  EXPECT_EQ(ms.milestones, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(ms.gamma, 0.5);
  EXPECT_EQ(cfg.activation, (ActivationSpec{EGem{SmoothnessOrder(2), Epsilon(0.01)}}));
  EXPECT_EQ(cfg.depth, 3U);
}

TEST(Config, UnknownKeyListsValidKeys) {
  try {
    (void)parse_experiment_config("epochs = 3\nlearning_rate = 0.1\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_NE(msg.find("learning_rate"), std::string::npos);
    for (auto key : kConfigKeys) EXPECT_NE(msg.find(key), std::string::npos) << key;
  }
  EXPECT_THROW(parse_experiment_config("lr = fast\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("lr = -1\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("activation = swish\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_experiment_config("optimizer = rmsprop\n"), ConfigError);
}

class IdxFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("gem_idx_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  static void put_be32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<unsigned char>(v >> s));
  }

  std::filesystem::path write(const std::string& name, const std::vector<unsigned char>& bytes) {
    const auto path = dir_ / name;
    std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                                static_cast<std::streamsize>(bytes.size()));
    return path;
  }

  std::vector<unsigned char> images(std::uint32_t count) {
    std::vector<unsigned char> out;
    put_be32(out, 0x803);
    put_be32(out, count);
    put_be32(out, 28);
    put_be32(out, 28);
    for (std::uint32_t i = 0; i < count * 784; ++i) out.push_back(static_cast<unsigned char>(i % 256));
    return out;
  }

  std::vector<unsigned char> labels(std::uint32_t count) {
    std::vector<unsigned char> out;
    put_be32(out, 0x801);
    put_be32(out, count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(static_cast<unsigned char>(i % 3));
    return out;
  }

  std::filesystem::path dir_;
};

TEST_F(IdxFixture, WellFormedFixture) {
  const Dataset d = load_idx(write("img", images(4)), write("lab", labels(4)));
  EXPECT_EQ(d.features.rows(), 4U);
  EXPECT_EQ(d.features.cols(), 784U);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 2, 0}));
  EXPECT_EQ(d.classes, 3);
  EXPECT_EQ(d.features(0, 255), 1.0);
  EXPECT_EQ(d.features(1, 0), (784 % 256) / 255.0);
}

TEST_F(IdxFixture, WrongMagicNamesBothValues) {
  auto bytes = images(1);
  bytes[3] = 0x01;
  try {
    (void)load_idx(write("img", bytes), write("lab", labels(1)));
    FAIL();
  } catch (const IdxError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("0x00000803"), std::string::npos) << msg;
    EXPECT_NE(msg.find("0x00000801"), std::string::npos) << msg;
  }
}

TEST_F(IdxFixture, EmptyAndTruncatedFiles) {
  EXPECT_THROW(load_idx(write("img", {}), write("lab", labels(1))), IdxError);
  auto cut = images(2);
  cut.resize(cut.size() - 1);
  try {
    (void)load_idx(write("img2", cut), write("lab", labels(2)));
    FAIL();
  } catch (const IdxError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
  EXPECT_THROW(load_idx(write("img3", images(3)), write("lab3", labels(2))), IdxError);
  EXPECT_THROW(load_idx(dir_ / "missing", dir_ / "missing"), IdxError);
}

TEST(Probe, Examples) {
  const auto one = suppression_probe(SmoothnessOrder(1), 1, 10000, 1);
  EXPECT_LT(one.mean_log_gain_per_layer, 0.0);
  const auto n1 = suppression_probe(SmoothnessOrder(1), 54, 10000, 2);
  const auto n2 = suppression_probe(SmoothnessOrder(2), 54, 10000, 2);
  EXPECT_LT(n2.log_product, n1.log_product);
  EXPECT_LT(suppression_probe(SmoothnessOrder(9), 18, 10000, 3).log_product, -40.0);
  EXPECT_THROW(suppression_probe(SmoothnessOrder(1), 3, 999, 1), std::invalid_argument);
  EXPECT_NEAR(n1.log_product, 54 * n1.mean_log_gain_per_layer, 1e-9);
  const auto again = suppression_probe(SmoothnessOrder(2), 54, 10000, 2);
  EXPECT_EQ(to_csv_row(again), to_csv_row(n2));
}

TEST(Probe, LogGainMatchesDirectFormula) {
  for (int n : {1, 2, 9}) {
    for (double x : {0.05, 0.5, 1.0, 2.0, 7.0}) {
      EXPECT_NEAR(log_gem_gain(x, SmoothnessOrder(n)), std::log(gem_grad(x, SmoothnessOrder(n))), 1e-12);
    }
  }
  EXPECT_TRUE(std::isfinite(log_gem_gain(1e-300, SmoothnessOrder(9))));
  EXPECT_TRUE(std::isfinite(log_gem_gain(1e300, SmoothnessOrder(9))));
}

TEST(DeadNeuron, GemStallsSegemRecovers) {
  const auto gem = dead_neuron_epoch(Gem{SmoothnessOrder(1)}, 7);
  EXPECT_EQ(gem.first_layer_grad_l1, 0.0);
  EXPECT_EQ(gem.first_layer_max_change, 0.0);
  EXPECT_GT(gem.steps, 0U);
  const auto se = dead_neuron_epoch(SEGem{SmoothnessOrder(1), Epsilon(1.0)}, 7);
  EXPECT_GT(se.first_layer_grad_l1, 0.0);
  EXPECT_GT(se.first_layer_max_change, 0.0);
}

}  // namespace
}  // namespace gem::nn
