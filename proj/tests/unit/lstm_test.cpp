#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gradient_check.hpp"
#include "test_support.hpp"
#include "tweetsense/lstm.hpp"

using namespace tweetsense;
using sentiment::Label;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// hidden=2, dim=2, one 2-unit ReLU layer, 2-unit sigmoid output; every
// weight set by hand.
lstm::LstmModel hand_model() {
  lstm::ModelConfig config;
  config.input_dim = 2;
  config.hidden_size = 2;
  config.max_len = 3;
  config.dense_units = {2};
  auto model = lstm::init_model(config, 1);
  auto& cell = model.params.cell;
  cell.input_weights.resize(8, 2);
  cell.input_weights << 0.1, -0.2,   // i0
                        0.3, 0.4,    // i1
                        -0.5, 0.6,   // f0
                        0.7, -0.8,   // f1
                        0.9, 0.1,    // o0
                        -0.2, 0.3,   // o1
                        0.4, -0.6,   // g0
                        0.5, 0.2;    // g1
  cell.recurrent_weights.resize(8, 2);
  cell.recurrent_weights << 0.2, 0.1, -0.3, 0.2, 0.1, 0.4, -0.1, 0.3, 0.5, -0.2, 0.2, 0.2, -0.4,
      0.1, 0.3, -0.5;
  cell.bias.resize(8);
  cell.bias << 0.05, -0.05, 1.0, 1.0, 0.0, 0.1, -0.1, 0.2;
  auto& d1 = model.params.dense[0];
  d1.weights.resize(2, 2);
  d1.weights << 1.5, -0.5, -1.0, 2.0;
  d1.bias.resize(2);
  d1.bias << 0.1, 0.05;
  auto& d2 = model.params.dense[1];
  d2.weights.resize(2, 2);
  d2.weights << 0.8, -1.2, -0.7, 1.1;
  d2.bias.resize(2);
  d2.bias << 0.0, 0.3;
  return model;
}

// Scalar evaluation of the same network, written out without Eigen.
std::array<double, 2> hand_forward(const std::vector<std::array<double, 2>>& xs) {
  const double W[8][2] = {{0.1, -0.2}, {0.3, 0.4}, {-0.5, 0.6}, {0.7, -0.8},
                          {0.9, 0.1},  {-0.2, 0.3}, {0.4, -0.6}, {0.5, 0.2}};
  const double U[8][2] = {{0.2, 0.1},  {-0.3, 0.2}, {0.1, 0.4},  {-0.1, 0.3},
                          {0.5, -0.2}, {0.2, 0.2},  {-0.4, 0.1}, {0.3, -0.5}};
  const double b[8] = {0.05, -0.05, 1.0, 1.0, 0.0, 0.1, -0.1, 0.2};
  double h[2] = {0, 0}, c[2] = {0, 0};
  for (const auto& x : xs) {
    double z[8];
    for (int r = 0; r < 8; ++r) z[r] = W[r][0] * x[0] + W[r][1] * x[1] + U[r][0] * h[0] + U[r][1] * h[1] + b[r];
    for (int j = 0; j < 2; ++j) {
      const double i = sigmoid(z[j]);
      const double f = sigmoid(z[2 + j]);
      const double g = std::tanh(z[6 + j]);
      c[j] = f * c[j] + i * g;
    }
    for (int j = 0; j < 2; ++j) h[j] = sigmoid(z[4 + j]) * std::tanh(c[j]);
  }
  const double a0 = std::max(0.0, 1.5 * h[0] - 0.5 * h[1] + 0.1);
  const double a1 = std::max(0.0, -1.0 * h[0] + 2.0 * h[1] + 0.05);
  return {sigmoid(0.8 * a0 - 1.2 * a1 + 0.0), sigmoid(-0.7 * a0 + 1.1 * a1 + 0.3)};
}

Eigen::MatrixXd sequence_of(const std::vector<std::array<double, 2>>& xs, int max_len) {
  Eigen::MatrixXd seq = Eigen::MatrixXd::Zero(max_len, 2);
  for (std::size_t t = 0; t < xs.size(); ++t) seq.row(static_cast<long>(t)) << xs[t][0], xs[t][1];
  return seq;
}

}  // namespace

TEST(LstmForward, HandComputedLengthOne) {
  const auto model = hand_model();
  const std::vector<std::array<double, 2>> xs{{0.5, -1.0}};
  const auto out = lstm::forward(model, sequence_of(xs, 3), 1);
  const auto expected = hand_forward(xs);
  ASSERT_EQ(out.size(), 2);
  EXPECT_NEAR(out[0], expected[0], 1e-12);
  EXPECT_NEAR(out[1], expected[1], 1e-12);
}

TEST(LstmForward, HandComputedRecurrence) {
  const auto model = hand_model();
  const std::vector<std::array<double, 2>> xs{{0.5, -1.0}, {-0.3, 0.8}, {1.2, 0.4}};
  const auto out = lstm::forward(model, sequence_of(xs, 3), 3);
  const auto expected = hand_forward(xs);
  EXPECT_NEAR(out[0], expected[0], 1e-12);
  EXPECT_NEAR(out[1], expected[1], 1e-12);
}

TEST(LstmForward, ZeroLengthUsesZeroState) {
  const auto model = hand_model();
  Eigen::MatrixXd seq = Eigen::MatrixXd::Constant(3, 2, 0.7);
  const auto out = lstm::forward(model, seq, 0);
  const auto expected = hand_forward({});
  EXPECT_NEAR(out[0], expected[0], 1e-12);
  EXPECT_NEAR(out[1], expected[1], 1e-12);
}

TEST(LstmForward, ZeroSequenceOutputsInOpenUnitInterval) {
  const auto model = lstm::init_model(lstm::ModelConfig{}, 3);
  const auto out = lstm::forward(model, Eigen::MatrixXd::Zero(50, 200), 50);
  ASSERT_EQ(out.size(), 2);
  for (int k = 0; k < 2; ++k) {
    EXPECT_GT(out[k], 0.0);
    EXPECT_LT(out[k], 1.0);
  }
}

TEST(LstmForward, ShapeMismatchThrows) {
  const auto model = lstm::init_model(test::tiny_config(), 1);
  EXPECT_THROW(lstm::forward(model, Eigen::MatrixXd::Zero(4, 3), 1), std::invalid_argument);
  EXPECT_THROW(lstm::forward(model, Eigen::MatrixXd::Zero(5, 2), 1), std::invalid_argument);
  EXPECT_THROW(lstm::forward(model, Eigen::MatrixXd::Zero(5, 3), 6), std::invalid_argument);
}

TEST(LstmForward, PaddingInvariance) {
  auto config = test::tiny_config();
  const auto samples = test::random_samples(config, 6, 31);
  const auto model = lstm::init_model(config, 2);
  auto longer = config;
  longer.max_len = 12;
  auto padded_model = model;
  padded_model.config = longer;
  for (const auto& s : samples) {
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(12, config.input_dim);
    padded.topRows(config.max_len) = s.sequence;
    const auto a = lstm::forward(model, s.sequence, s.valid_length);
    const auto b = lstm::forward(padded_model, padded, s.valid_length);
    EXPECT_TRUE(a == b);
  }
}

TEST(LstmForward, GateRanges) {
  const auto config = test::tiny_config();
  const auto samples = test::random_samples(config, 8, 5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto model = lstm::init_model(config, seed);
    for (const auto& s : samples) {
      lstm::GateTrace trace;
      lstm::forward(model, s.sequence * 5.0, s.valid_length, &trace);
      ASSERT_EQ(trace.input.size(), static_cast<std::size_t>(s.valid_length));
      for (int t = 0; t < s.valid_length; ++t) {
        for (const auto* gate : {&trace.input, &trace.forget, &trace.output}) {
          EXPECT_GT((*gate)[t].minCoeff(), 0.0);
          EXPECT_LT((*gate)[t].maxCoeff(), 1.0);
        }
        EXPECT_GT(trace.candidate[t].minCoeff(), -1.0);
        EXPECT_LT(trace.candidate[t].maxCoeff(), 1.0);
      }
    }
  }
}

TEST(LstmGradient, MatchesFiniteDifferences) {
  const auto config = test::tiny_config();
  for (std::uint64_t seed : {1u, 2u}) {
    const auto model = lstm::init_model(config, seed);
    const auto batch = test::random_samples(config, 4, seed + 100);
    const auto check = test::check_gradients(model, batch);
    for (const auto& [name, err] : check.worst) EXPECT_LT(err, 1e-3) << name << " seed " << seed;
  }
}

TEST(LstmGradient, DuplicatedSampleSameLoss) {
  const auto config = test::tiny_config();
  const auto model = lstm::init_model(config, 7);
  const auto samples = test::random_samples(config, 1, 7);
  const std::vector<lstm::Sample> twice{samples[0], samples[0]};
  EXPECT_DOUBLE_EQ(lstm::loss(model, twice), lstm::loss(model, samples));
}

TEST(LstmGradient, EmptySequencesGiveZeroRecurrentGradients) {
  const auto config = test::tiny_config();
  const auto model = lstm::init_model(config, 8);
  auto batch = test::random_samples(config, 3, 8);
  for (auto& s : batch) s.valid_length = 0;
  const auto result = lstm::loss_and_grad(model, batch);
  EXPECT_TRUE(result.grad.cell.input_weights.isZero(0.0));
  EXPECT_TRUE(result.grad.cell.recurrent_weights.isZero(0.0));
  EXPECT_FALSE(result.grad.dense.back().bias.isZero(0.0));
}

TEST(LstmGradient, RejectsBadBatches) {
  const auto config = test::tiny_config();
  const auto model = lstm::init_model(config, 1);
  EXPECT_THROW(lstm::loss_and_grad(model, {}), std::invalid_argument);
  auto batch = test::random_samples(config, 1, 1);
  batch[0].label = Label::neutral();
  EXPECT_THROW(lstm::loss_and_grad(model, batch), std::invalid_argument);
}

TEST(LstmTraining, OneSmallStepReducesLoss) {
  const auto config = test::tiny_config();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto model = lstm::init_model(config, seed);
    const auto batch = test::random_samples(config, 8, seed * 17);
    const auto before = lstm::loss_and_grad(model, batch);
    lstm::AdamConfig adam;
    adam.learning_rate = 1e-4;
    lstm::Adam optimizer(model.params, adam);
    optimizer.step(model.params, before.grad);
    EXPECT_LT(lstm::loss(model, batch), before.loss) << "seed " << seed;
  }
}

TEST(LstmPredict, Examples) {
  EXPECT_EQ(lstm::predict_from_outputs(Eigen::Vector2d(0.2, 0.9)), Label::positive());
  EXPECT_EQ(lstm::predict_from_outputs(Eigen::Vector2d(0.9, 0.2)), Label::negative());
  EXPECT_EQ(lstm::predict_from_outputs(Eigen::Vector2d(0.5, 0.5)), Label::positive());
}

TEST(LstmParameters, Counts) {
  lstm::Parameters dense_only;
  dense_only.dense.push_back({Eigen::MatrixXd::Zero(2, 32), Eigen::VectorXd::Zero(2),
                              lstm::Activation::kSigmoid});
  EXPECT_EQ(lstm::count_parameters(dense_only), 66u);

  lstm::Parameters cell_only;
  cell_only.cell.input_weights = Eigen::MatrixXd::Zero(256, 200);
  cell_only.cell.recurrent_weights = Eigen::MatrixXd::Zero(256, 64);
  cell_only.cell.bias = Eigen::VectorXd::Zero(256);
  EXPECT_EQ(lstm::count_parameters(cell_only), 67840u);

  EXPECT_EQ(lstm::count_parameters(lstm::Parameters{}), 0u);
  EXPECT_EQ(lstm::count_parameters(lstm::init_model(lstm::ModelConfig{}, 1).params), 86562u);
}

TEST(LstmParameters, ForgetBiasStartsAtOne) {
  auto model = lstm::init_model(test::tiny_config(), 3);
  EXPECT_TRUE(model.params.cell.gate_bias(lstm::Gate::kForget).isOnes(0.0));
  EXPECT_TRUE(model.params.cell.gate_bias(lstm::Gate::kInput).isZero(0.0));
}

TEST(LstmCheckpoint, RoundTripIsExact) {
  const auto model = lstm::init_model(test::tiny_config(), 12);
  std::stringstream buffer;
  lstm::save_checkpoint(buffer, model);
  const auto back = lstm::load_checkpoint(buffer);
  EXPECT_EQ(back.config, model.config);
  std::vector<double> a, b;
  lstm::for_each_tensor(model.params, [&](const std::string&, const double* d, std::size_t n) {
    a.insert(a.end(), d, d + n);
  });
  lstm::for_each_tensor(back.params, [&](const std::string&, const double* d, std::size_t n) {
    b.insert(b.end(), d, d + n);
  });
  EXPECT_EQ(a, b);
}

TEST(LstmCheckpoint, BadMagicThrows) {
  std::istringstream in("not a checkpoint\n");
  EXPECT_THROW(lstm::load_checkpoint(in), std::runtime_error);
}

namespace {

// Sequences of random token vectors; label 1 exactly when the marker
// vector appears somewhere in the sequence.
std::vector<lstm::Sample> marker_dataset(const lstm::ModelConfig& config, std::size_t n,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> value(0.0, 1.0);
  std::vector<Eigen::VectorXd> vocab(20, Eigen::VectorXd(config.input_dim));
  for (auto& v : vocab) for (int d = 0; d < config.input_dim; ++d) v[d] = value(rng);
  std::uniform_int_distribution<std::size_t> word(1, vocab.size() - 1);
  std::uniform_int_distribution<int> len(2, config.max_len);
  std::vector<lstm::Sample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = samples[i];
    s.valid_length = len(rng);
    s.sequence = Eigen::MatrixXd::Zero(config.max_len, config.input_dim);
    for (int t = 0; t < s.valid_length; ++t) s.sequence.row(t) = vocab[word(rng)].transpose();
    const bool positive = i % 2 == 0;
    if (positive) {
      std::uniform_int_distribution<int> at(0, s.valid_length - 1);
      s.sequence.row(at(rng)) = vocab[0].transpose();
    }
    s.label = positive ? Label::positive() : Label::negative();
  }
  return samples;
}

}  // namespace

TEST(LstmTraining, Deterministic) {
  lstm::ModelConfig config = test::tiny_config();
  const auto data = marker_dataset(config, 40, 3);
  lstm::TrainConfig train;
  train.epochs = 3;
  train.batch_size = 8;
  train.seed = 9;
  const auto a = lstm::train(data, config, train);
  const auto b = lstm::train(data, config, train);
  ASSERT_EQ(a.log.size(), 3u);
  for (std::size_t e = 0; e < a.log.size(); ++e) {
    EXPECT_EQ(a.log[e].train_loss, b.log[e].train_loss);
    EXPECT_EQ(a.log[e].val_loss, b.log[e].val_loss);
    EXPECT_EQ(a.log[e].val_accuracy, b.log[e].val_accuracy);
  }
  EXPECT_EQ(a.train_indices, b.train_indices);
  EXPECT_EQ(a.train_indices.size(), 32u);
  EXPECT_EQ(a.val_indices.size(), 8u);
}

TEST(LstmTraining, SeparableCorpusIsLearned) {
  lstm::ModelConfig config;
  config.input_dim = 8;
  config.hidden_size = 16;
  config.max_len = 10;
  const auto data = marker_dataset(config, 600, 4);
  lstm::TrainConfig train;
  train.epochs = 15;
  train.seed = 2;
  const auto result = lstm::train(data, config, train);
  const auto final_train = lstm::evaluate(result.model, data, result.train_indices);
  EXPECT_GE(final_train.accuracy, 95.0);
  for (const auto& e : result.log) {
    EXPECT_GE(e.train_accuracy, 0.0);
    EXPECT_LE(e.train_accuracy, 100.0);
    EXPECT_GE(e.val_loss, 0.0);
  }
}

TEST(LstmTraining, SingleClassWarns) {
  const auto config = test::tiny_config();
  auto data = marker_dataset(config, 10, 5);
  for (auto& s : data) s.label = Label::positive();
  lstm::TrainConfig train;
  train.epochs = 1;
  const auto result = lstm::train(data, config, train);
  EXPECT_FALSE(result.warnings.empty());
}
