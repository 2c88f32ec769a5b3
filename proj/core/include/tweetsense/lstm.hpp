#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tweetsense/sentiment.hpp"

namespace tweetsense::lstm {

// Row-block order of the stacked gate parameters.
enum class Gate { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };

enum class Activation { kRelu, kSigmoid };

struct LstmCellParams {
  Eigen::MatrixXd input_weights;      // 4H x D, gate blocks stacked by Gate
  Eigen::MatrixXd recurrent_weights;  // 4H x H
  Eigen::VectorXd bias;               // 4H

  int hidden_size() const { return static_cast<int>(recurrent_weights.cols()); }
  int input_size() const { return static_cast<int>(input_weights.cols()); }

  auto gate_input_weights(Gate g) { return input_weights.middleRows(static_cast<int>(g) * hidden_size(), hidden_size()); }
  auto gate_recurrent_weights(Gate g) { return recurrent_weights.middleRows(static_cast<int>(g) * hidden_size(), hidden_size()); }
  auto gate_bias(Gate g) { return bias.segment(static_cast<int>(g) * hidden_size(), hidden_size()); }
};

struct DenseParams {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::kRelu;
};

struct ModelConfig {
  int input_dim = 200;
  int hidden_size = 64;
  int max_len = 50;
  std::vector<int> dense_units = {128, 64, 32};  // ReLU layers
  int output_units = 2;                          // sigmoid layer

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// All trainable tensors. Gradients and optimizer moments use the same type.
struct Parameters {
  LstmCellParams cell;
  std::vector<DenseParams> dense;  // ReLU layers followed by the sigmoid layer
};

struct LstmModel {
  ModelConfig config;
  Parameters params;
};

// Glorot-uniform weights from a seeded generator, zero biases except the
// forget gate (1.0).
LstmModel init_model(const ModelConfig& config, std::uint64_t seed);

// Zero tensors shaped like `like`.
Parameters zeros_like(const Parameters& like);

// Calls fn(name, data, size) for every tensor in declaration order.
void for_each_tensor(Parameters& params,
                     const std::function<void(const std::string&, double*, std::size_t)>& fn);
void for_each_tensor(const Parameters& params,
                     const std::function<void(const std::string&, const double*, std::size_t)>& fn);

std::size_t count_parameters(const Parameters& params);

// Per-timestep gate activations, recorded when passed to forward().
struct GateTrace {
  std::vector<Eigen::VectorXd> input, forget, output, candidate;
};

// Runs the recurrence over the first valid_length rows, then the dense
// stack on the final hidden state. Throws std::invalid_argument when the
// sequence is not max_len x input_dim or valid_length is out of range.
Eigen::VectorXd forward(const LstmModel& model, const Eigen::MatrixXd& sequence, int valid_length,
                        GateTrace* trace = nullptr);

struct Sample {
  Eigen::MatrixXd sequence;  // max_len x input_dim
  int valid_length = 0;
  sentiment::Label label = sentiment::Label::negative();
};

struct LossAndGrad {
  double loss = 0.0;
  Parameters grad;
};

// Mean categorical cross-entropy of the sigmoid outputs renormalized to sum
// to one, with gradients by backpropagation through time. Throws
// std::invalid_argument for an empty batch or neutral label and
// std::runtime_error naming the sample when the loss is not finite.
LossAndGrad loss_and_grad(const LstmModel& model, std::span<const Sample> batch);
double loss(const LstmModel& model, std::span<const Sample> batch);

// Index 1 is positive; a tie goes to positive.
sentiment::Label predict_from_outputs(const Eigen::VectorXd& outputs);
sentiment::Label predict(const LstmModel& model, const Eigen::MatrixXd& sequence, int valid_length);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const Parameters& like, AdamConfig config);
  void step(Parameters& params, const Parameters& grad);
  long steps() const { return t_; }

 private:
  AdamConfig config_;
  Parameters m_;
  Parameters v_;
  long t_ = 0;
};

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
  AdamConfig adam;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;      // mean batch loss during the epoch
  double train_accuracy = 0.0;  // percent
  double val_loss = 0.0;
  double val_accuracy = 0.0;    // percent
};

struct TrainResult {
  LstmModel model;
  std::vector<EpochLog> log;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  std::vector<std::string> warnings;
};

// Seeded shuffle, train/validation split, then minibatch Adam for the
// configured epochs. Deterministic for a fixed seed.
TrainResult train(std::span<const Sample> dataset, const ModelConfig& model_config,
                  const TrainConfig& config);

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;  // percent
};
Evaluation evaluate(const LstmModel& model, std::span<const Sample> samples,
                    std::span<const std::size_t> indices);

// epoch,train_loss,train_acc,val_loss,val_acc
void write_epoch_log_csv(const std::filesystem::path& path, const std::vector<EpochLog>& log);

// Text checkpoint: config header then every tensor in declaration order at
// 17 significant digits; load(save(m)) == m bit for bit.
void save_checkpoint(std::ostream& out, const LstmModel& model);
void save_checkpoint(const std::filesystem::path& path, const LstmModel& model);
LstmModel load_checkpoint(std::istream& in);
LstmModel load_checkpoint(const std::filesystem::path& path);

}  // namespace tweetsense::lstm
