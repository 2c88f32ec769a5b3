#include "tweetsense/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tweetsense/csv.hpp"

namespace tweetsense::lstm {
namespace {

constexpr double kForgetBiasInit = 1.0;
constexpr char kCheckpointMagic[] = "tweetsense-lstm";
constexpr int kCheckpointVersion = 1;

double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

void glorot_uniform(Eigen::MatrixXd& m, int fan_in, int fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * unit(rng()) - 1.0) * limit;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) { return z.unaryExpr([](double x) { return sigmoid(x); }); }

int class_index(sentiment::Label label) {
  if (label == sentiment::Label::positive()) return 1;
  if (label == sentiment::Label::negative()) return 0;
  throw std::invalid_argument("lstm: neutral labels are not trainable");
}

void check_input(const LstmModel& model, const Eigen::MatrixXd& sequence, int valid_length) {
  const auto& c = model.config;
  if (sequence.rows() != c.max_len || sequence.cols() != c.input_dim) {
    std::ostringstream msg;
    msg << "lstm: sequence is " << sequence.rows() << "x" << sequence.cols() << ", expected "
        << c.max_len << "x" << c.input_dim;
    throw std::invalid_argument(msg.str());
  }
  if (valid_length < 0 || valid_length > c.max_len) {
    throw std::invalid_argument("lstm: valid_length " + std::to_string(valid_length) +
                                " outside [0, max_len]");
  }
}

// Activations kept for the backward pass.
struct Tape {
  Eigen::MatrixXd gates;  // T x 4H post-activation, columns by Gate
  Eigen::MatrixXd cells;  // (T+1) x H, row 0 is the initial state
  Eigen::MatrixXd hidden; // (T+1) x H
  std::vector<Eigen::VectorXd> pre;   // dense pre-activations
  std::vector<Eigen::VectorXd> post;  // dense inputs: post[0] = final hidden
};

Eigen::VectorXd run_forward(const LstmModel& model, const Eigen::MatrixXd& sequence, int steps,
                            Tape& tape, GateTrace* trace) {
  const auto& cell = model.params.cell;
  const int h = cell.hidden_size();
  tape.gates.resize(steps, 4 * h);
  tape.cells = Eigen::MatrixXd::Zero(steps + 1, h);
  tape.hidden = Eigen::MatrixXd::Zero(steps + 1, h);

  // Input projections for every step at once.
  const Eigen::MatrixXd projected = sequence.topRows(steps) * cell.input_weights.transpose();
  Eigen::VectorXd z(4 * h);
  for (int t = 0; t < steps; ++t) {
    z.noalias() = projected.row(t).transpose() + cell.bias;
    z.noalias() += cell.recurrent_weights * tape.hidden.row(t).transpose();
    auto gates = tape.gates.row(t);
    for (int k = 0; k < 3 * h; ++k) gates(k) = sigmoid(z(k));
    for (int k = 3 * h; k < 4 * h; ++k) gates(k) = std::tanh(z(k));

    const auto in = gates.segment(0, h).array();
    const auto forget = gates.segment(h, h).array();
    const auto out = gates.segment(2 * h, h).array();
    const auto cand = gates.segment(3 * h, h).array();
    tape.cells.row(t + 1) = (forget * tape.cells.row(t).array() + in * cand).matrix();
    tape.hidden.row(t + 1) = (out * tape.cells.row(t + 1).array().tanh()).matrix();

    if (trace) {
      trace->input.push_back(in.matrix().transpose());
      trace->forget.push_back(forget.matrix().transpose());
      trace->output.push_back(out.matrix().transpose());
      trace->candidate.push_back(cand.matrix().transpose());
    }
  }

  tape.pre.clear();
  tape.post.clear();
  tape.post.push_back(tape.hidden.row(steps).transpose());
  for (const auto& layer : model.params.dense) {
    Eigen::VectorXd pre = layer.weights * tape.post.back() + layer.bias;
    Eigen::VectorXd act = layer.activation == Activation::kRelu ? Eigen::VectorXd(pre.cwiseMax(0.0))
                                                                : sigmoid(pre);
    tape.pre.push_back(std::move(pre));
    tape.post.push_back(std::move(act));
  }
  return tape.post.back();
}

// Cross-entropy of renormalized sigmoid outputs, from the final
// pre-activations for numerical stability.
double sample_loss(const Eigen::VectorXd& pre, int target) {
  Eigen::VectorXd log_s = pre.unaryExpr([](double x) { return log_sigmoid(x); });
  const double max = log_s.maxCoeff();
  const double log_sum = max + std::log((log_s.array() - max).exp().sum());
  return log_sum - log_s(target);
}

void add_scaled(Parameters& into, const Parameters& from, double scale) {
  into.cell.input_weights += scale * from.cell.input_weights;
  into.cell.recurrent_weights += scale * from.cell.recurrent_weights;
  into.cell.bias += scale * from.cell.bias;
  for (std::size_t l = 0; l < into.dense.size(); ++l) {
    into.dense[l].weights += scale * from.dense[l].weights;
    into.dense[l].bias += scale * from.dense[l].bias;
  }
}

struct SampleResult {
  double loss = 0.0;
  bool correct = false;
};

// Accumulates the gradient of one sample's loss into grad.
SampleResult backward_sample(const LstmModel& model, const Sample& sample, Parameters& grad) {
  Tape tape;
  const int steps = sample.valid_length;
  const Eigen::VectorXd outputs = run_forward(model, sample.sequence, steps, tape, nullptr);
  const int target = class_index(sample.label);
  const double loss = sample_loss(tape.pre.back(), target);
  const bool correct = predict_from_outputs(outputs) == sample.label;

  // dL/dz_k = (1 - s_k)(p_k - [k == target]), p the renormalized outputs.
  const Eigen::VectorXd p = outputs / outputs.sum();
  Eigen::VectorXd delta = (1.0 - outputs.array()) * p.array();
  delta(target) -= 1.0 - outputs(target);

  for (std::size_t l = model.params.dense.size(); l-- > 0;) {
    const auto& layer = model.params.dense[l];
    grad.dense[l].weights.noalias() += delta * tape.post[l].transpose();
    grad.dense[l].bias += delta;
    Eigen::VectorXd upstream = layer.weights.transpose() * delta;
    if (l > 0) {
      delta = (tape.pre[l - 1].array() > 0.0).select(upstream, 0.0);
    } else {
      delta = std::move(upstream);
    }
  }

  const auto& cell = model.params.cell;
  const int h = cell.hidden_size();
  Eigen::VectorXd dh = std::move(delta);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
  Eigen::MatrixXd dz_all(steps, 4 * h);
  Eigen::VectorXd dz(4 * h);
  for (int t = steps - 1; t >= 0; --t) {
    const auto gates = tape.gates.row(t).transpose();
    const auto in = gates.segment(0, h).array();
    const auto forget = gates.segment(h, h).array();
    const auto out = gates.segment(2 * h, h).array();
    const auto cand = gates.segment(3 * h, h).array();
    const Eigen::ArrayXd tanh_c = tape.cells.row(t + 1).transpose().array().tanh();

    const Eigen::ArrayXd dc = dc_next.array() + dh.array() * out * (1.0 - tanh_c.square());
    dz.segment(0, h) = (dc * cand * in * (1.0 - in)).matrix();
    dz.segment(h, h) = (dc * tape.cells.row(t).transpose().array() * forget * (1.0 - forget)).matrix();
    dz.segment(2 * h, h) = (dh.array() * tanh_c * out * (1.0 - out)).matrix();
    dz.segment(3 * h, h) = (dc * in * (1.0 - cand.square())).matrix();
    dc_next = (dc * forget).matrix();

    dz_all.row(t) = dz.transpose();
    grad.cell.recurrent_weights.noalias() += dz * tape.hidden.row(t);
    dh.noalias() = cell.recurrent_weights.transpose() * dz;
  }
  if (steps > 0) {
    grad.cell.input_weights.noalias() += dz_all.transpose() * sample.sequence.topRows(steps);
    grad.cell.bias += dz_all.colwise().sum().transpose();
  }
  return {loss, correct};
}

// Mean loss and gradient over the samples selected by `indices`, summed in
// index order.
LossAndGrad batch_loss_and_grad(const LstmModel& model, std::span<const Sample> samples,
                                std::span<const std::size_t> indices, std::size_t* correct) {
  if (indices.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  LossAndGrad result{0.0, zeros_like(model.params)};
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& sample = samples[indices[i]];
    check_input(model, sample.sequence, sample.valid_length);
    const auto r = backward_sample(model, sample, result.grad);
    if (!std::isfinite(r.loss)) {
      throw std::runtime_error("loss_and_grad: non-finite loss at sample " + std::to_string(indices[i]));
    }
    result.loss += r.loss;
    if (correct && r.correct) ++*correct;
  }
  const double scale = 1.0 / static_cast<double>(indices.size());
  result.loss *= scale;
  Parameters scaled = zeros_like(model.params);
  add_scaled(scaled, result.grad, scale);
  result.grad = std::move(scaled);
  return result;
}

std::string read_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error(std::string("checkpoint: missing ") + what);
  return token;
}

void expect(std::istream& in, const std::string& word) {
  const std::string got = read_token(in, word.c_str());
  if (got != word) throw std::runtime_error("checkpoint: expected '" + word + "', found '" + got + "'");
}

int read_int(std::istream& in, const char* what) {
  const std::string token = read_token(in, what);
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) throw std::runtime_error(std::string("checkpoint: bad ") + what);
  return value;
}

}  // namespace

LstmModel init_model(const ModelConfig& config, std::uint64_t seed) {
  if (config.input_dim < 1 || config.hidden_size < 1 || config.max_len < 1 || config.output_units < 1) {
    throw std::invalid_argument("init_model: dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  LstmModel model;
  model.config = config;
  const int h = config.hidden_size;
  auto& cell = model.params.cell;
  cell.input_weights.resize(4 * h, config.input_dim);
  cell.recurrent_weights.resize(4 * h, h);
  glorot_uniform(cell.input_weights, config.input_dim, 4 * h, rng);
  glorot_uniform(cell.recurrent_weights, h, 4 * h, rng);
  cell.bias = Eigen::VectorXd::Zero(4 * h);
  cell.gate_bias(Gate::kForget).setConstant(kForgetBiasInit);

  int fan_in = h;
  auto add_layer = [&](int units, Activation activation) {
    if (units < 1) throw std::invalid_argument("init_model: dense layer with no units");
    DenseParams layer;
    layer.weights.resize(units, fan_in);
    glorot_uniform(layer.weights, fan_in, units, rng);
    layer.bias = Eigen::VectorXd::Zero(units);
    layer.activation = activation;
    model.params.dense.push_back(std::move(layer));
    fan_in = units;
  };
  for (int units : config.dense_units) add_layer(units, Activation::kRelu);
  add_layer(config.output_units, Activation::kSigmoid);
  return model;
}

Parameters zeros_like(const Parameters& like) {
  Parameters p;
  p.cell.input_weights = Eigen::MatrixXd::Zero(like.cell.input_weights.rows(), like.cell.input_weights.cols());
  p.cell.recurrent_weights =
      Eigen::MatrixXd::Zero(like.cell.recurrent_weights.rows(), like.cell.recurrent_weights.cols());
  p.cell.bias = Eigen::VectorXd::Zero(like.cell.bias.size());
  for (const auto& layer : like.dense) {
    p.dense.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                       Eigen::VectorXd::Zero(layer.bias.size()), layer.activation});
  }
  return p;
}

void for_each_tensor(Parameters& params,
                     const std::function<void(const std::string&, double*, std::size_t)>& fn) {
  auto visit = [&](const std::string& name, auto& t) { fn(name, t.data(), static_cast<std::size_t>(t.size())); };
  visit("lstm.input_weights", params.cell.input_weights);
  visit("lstm.recurrent_weights", params.cell.recurrent_weights);
  visit("lstm.bias", params.cell.bias);
  for (std::size_t l = 0; l < params.dense.size(); ++l) {
    visit("dense" + std::to_string(l) + ".weights", params.dense[l].weights);
    visit("dense" + std::to_string(l) + ".bias", params.dense[l].bias);
  }
}

void for_each_tensor(const Parameters& params,
                     const std::function<void(const std::string&, const double*, std::size_t)>& fn) {
  for_each_tensor(const_cast<Parameters&>(params),
                  [&](const std::string& name, double* data, std::size_t n) { fn(name, data, n); });
}

std::size_t count_parameters(const Parameters& params) {
  std::size_t total = 0;
  for_each_tensor(params, [&](const std::string&, const double*, std::size_t n) { total += n; });
  return total;
}

Eigen::VectorXd forward(const LstmModel& model, const Eigen::MatrixXd& sequence, int valid_length,
                        GateTrace* trace) {
  check_input(model, sequence, valid_length);
  Tape tape;
  return run_forward(model, sequence, valid_length, tape, trace);
}

LossAndGrad loss_and_grad(const LstmModel& model, std::span<const Sample> batch) {
  std::vector<std::size_t> indices(batch.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  return batch_loss_and_grad(model, batch, indices, nullptr);
}

double loss(const LstmModel& model, std::span<const Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("loss: empty batch");
  double total = 0.0;
  Tape tape;
  for (const auto& s : batch) {
    check_input(model, s.sequence, s.valid_length);
    run_forward(model, s.sequence, s.valid_length, tape, nullptr);
    total += sample_loss(tape.pre.back(), class_index(s.label));
  }
  return total / static_cast<double>(batch.size());
}

sentiment::Label predict_from_outputs(const Eigen::VectorXd& outputs) {
  if (outputs.size() != 2) throw std::invalid_argument("predict: expected 2 outputs");
  return outputs(1) >= outputs(0) ? sentiment::Label::positive() : sentiment::Label::negative();
}

sentiment::Label predict(const LstmModel& model, const Eigen::MatrixXd& sequence, int valid_length) {
  return predict_from_outputs(forward(model, sequence, valid_length));
}

Adam::Adam(const Parameters& like, AdamConfig config)
    : config_(config), m_(zeros_like(like)), v_(zeros_like(like)) {}

void Adam::step(Parameters& params, const Parameters& grad) {
  ++t_;
  const double correction1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));

  std::vector<const double*> g;
  for_each_tensor(grad, [&](const std::string&, const double* d, std::size_t) { g.push_back(d); });
  std::vector<double*> m;
  std::vector<double*> v;
  for_each_tensor(m_, [&](const std::string&, double* d, std::size_t) { m.push_back(d); });
  for_each_tensor(v_, [&](const std::string&, double* d, std::size_t) { v.push_back(d); });

  std::size_t k = 0;
  for_each_tensor(params, [&](const std::string&, double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      m[k][i] = config_.beta1 * m[k][i] + (1.0 - config_.beta1) * g[k][i];
      v[k][i] = config_.beta2 * v[k][i] + (1.0 - config_.beta2) * g[k][i] * g[k][i];
      const double m_hat = m[k][i] / correction1;
      const double v_hat = v[k][i] / correction2;
      p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
    ++k;
  });
}

Evaluation evaluate(const LstmModel& model, std::span<const Sample> samples,
                    std::span<const std::size_t> indices) {
  Evaluation e;
  if (indices.empty()) return e;
  Tape tape;
  std::size_t correct = 0;
  for (std::size_t idx : indices) {
    const auto& s = samples[idx];
    check_input(model, s.sequence, s.valid_length);
    const Eigen::VectorXd out = run_forward(model, s.sequence, s.valid_length, tape, nullptr);
    e.loss += sample_loss(tape.pre.back(), class_index(s.label));
    if (predict_from_outputs(out) == s.label) ++correct;
  }
  const auto n = static_cast<double>(indices.size());
  e.loss /= n;
  e.accuracy = 100.0 * static_cast<double>(correct) / n;
  return e;
}

TrainResult train(std::span<const Sample> dataset, const ModelConfig& model_config,
                  const TrainConfig& config) {
  if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw std::invalid_argument("train: train_fraction must be in (0, 1)");
  }
  if (dataset.size() < 2) throw std::invalid_argument("train: need at least two samples");

  TrainResult result;
  std::size_t positives = 0;
  for (const auto& s : dataset) {
    if (class_index(s.label) == 1) ++positives;
  }
  if (positives == 0 || positives == dataset.size()) {
    result.warnings.push_back("dataset contains a single class; accuracy is degenerate");
  }

  // Independent streams for the split, initialization and epoch shuffles.
  std::seed_seq seq{config.seed, std::uint64_t{0x5eed}};
  std::mt19937_64 master(seq);
  std::mt19937_64 split_rng(master());
  const std::uint64_t init_seed = master();
  std::mt19937_64 shuffle_rng(master());

  auto shuffle = [](std::vector<std::size_t>& v, std::mt19937_64& rng) {
    // Fisher-Yates with an explicit index map, independent of std::shuffle.
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(unit(rng()) * static_cast<double>(i));
      std::swap(v[i - 1], v[j]);
    }
  };

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, split_rng);
  auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(dataset.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, dataset.size() - 1);
  result.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  result.val_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  result.model = init_model(model_config, init_seed);
  Adam optimizer(result.model.params, config.adam);

  std::vector<std::size_t> epoch_order = result.train_indices;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(epoch_order, shuffle_rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < epoch_order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(epoch_order.size(), start + static_cast<std::size_t>(config.batch_size));
      // Running metrics: each batch is scored with the weights it is
      // trained from.
      const std::span<const std::size_t> batch(epoch_order.data() + start, end - start);
      const auto lg = batch_loss_and_grad(result.model, dataset, batch, &correct);
      loss_sum += lg.loss * static_cast<double>(batch.size());
      optimizer.step(result.model.params, lg.grad);
    }
    const auto val = evaluate(result.model, dataset, result.val_indices);
    const auto n = static_cast<double>(epoch_order.size());
    result.log.push_back({epoch, loss_sum / n, 100.0 * static_cast<double>(correct) / n, val.loss,
                          val.accuracy});
  }
  return result;
}

void write_epoch_log_csv(const std::filesystem::path& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  csv::write_row(out, {"epoch", "train_loss", "train_acc", "val_loss", "val_acc"});
  char buf[4][32];
  for (const auto& e : log) {
    std::snprintf(buf[0], sizeof(buf[0]), "%.6f", e.train_loss);
    std::snprintf(buf[1], sizeof(buf[1]), "%.4f", e.train_accuracy);
    std::snprintf(buf[2], sizeof(buf[2]), "%.6f", e.val_loss);
    std::snprintf(buf[3], sizeof(buf[3]), "%.4f", e.val_accuracy);
    csv::write_row(out, {std::to_string(e.epoch), buf[0], buf[1], buf[2], buf[3]});
  }
}

void save_checkpoint(std::ostream& out, const LstmModel& model) {
  const auto& c = model.config;
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "input_dim " << c.input_dim << '\n';
  out << "hidden_size " << c.hidden_size << '\n';
  out << "max_len " << c.max_len << '\n';
  out << "dense " << c.dense_units.size();
  for (int u : c.dense_units) out << ' ' << u;
  out << '\n';
  out << "output_units " << c.output_units << '\n';
  char buf[40];
  for_each_tensor(model.params, [&](const std::string& name, const double* data, std::size_t n) {
    out << "tensor " << name << ' ' << n << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", data[i]);
      out << buf << (i + 1 == n ? '\n' : ' ');
    }
    if (n == 0) out << '\n';
  });
}

void save_checkpoint(const std::filesystem::path& path, const LstmModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  save_checkpoint(out, model);
}

LstmModel load_checkpoint(std::istream& in) {
  expect(in, kCheckpointMagic);
  if (read_int(in, "version") != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
  ModelConfig c;
  expect(in, "input_dim");
  c.input_dim = read_int(in, "input_dim");
  expect(in, "hidden_size");
  c.hidden_size = read_int(in, "hidden_size");
  expect(in, "max_len");
  c.max_len = read_int(in, "max_len");
  expect(in, "dense");
  const int layers = read_int(in, "dense layer count");
  if (layers < 0) throw std::runtime_error("checkpoint: bad dense layer count");
  c.dense_units.clear();
  for (int i = 0; i < layers; ++i) c.dense_units.push_back(read_int(in, "dense units"));
  expect(in, "output_units");
  c.output_units = read_int(in, "output_units");

  LstmModel model = init_model(c, 0);
  for_each_tensor(model.params, [&](const std::string& name, double* data, std::size_t n) {
    expect(in, "tensor");
    expect(in, name);
    if (static_cast<std::size_t>(read_int(in, "tensor size")) != n) {
      throw std::runtime_error("checkpoint: size mismatch for " + name);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string token = read_token(in, "tensor value");
      char* end = nullptr;
      data[i] = std::strtod(token.c_str(), &end);
      if (*end != '\0' || !std::isfinite(data[i])) {
        throw std::runtime_error("checkpoint: bad value in " + name);
      }
    }
  });
  return model;
}

LstmModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return load_checkpoint(in);
}

}  // namespace tweetsense::lstm
