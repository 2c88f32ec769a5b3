#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "tweetsense/lstm.hpp"

namespace tweetsense::test {

inline lstm::ModelConfig tiny_config() {
  lstm::ModelConfig config;
  config.input_dim = 3;
  config.hidden_size = 4;
  config.max_len = 5;
  return config;
}

// Random samples with valid lengths spread over [0, max_len] and both labels.
inline std::vector<lstm::Sample> random_samples(const lstm::ModelConfig& config, std::size_t n,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<lstm::Sample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = samples[i];
    s.valid_length = static_cast<int>((i * 2 + 1) % static_cast<std::size_t>(config.max_len + 1));
    if (i == 0) s.valid_length = config.max_len;
    s.sequence = Eigen::MatrixXd::Zero(config.max_len, config.input_dim);
    for (int t = 0; t < s.valid_length; ++t) {
      for (int d = 0; d < config.input_dim; ++d) s.sequence(t, d) = value(rng);
    }
    s.label = i % 2 == 0 ? sentiment::Label::positive() : sentiment::Label::negative();
  }
  return samples;
}

struct GradientCheck {
  // Worst relative error per tensor name.
  std::map<std::string, double> worst;
  double overall = 0.0;
  std::size_t components = 0;
  // Components whose stencil straddles a ReLU kink: the one-sided
  // differences disagree, so the central difference is meaningless there
  // and the analytic value is compared against the nearer one-sided one.
  std::size_t kinks = 0;
};

// Compares loss_and_grad against central differences of loss().
inline GradientCheck check_gradients(const lstm::LstmModel& model,
                                     const std::vector<lstm::Sample>& batch, double h = 1e-5,
                                     double tolerance = 1e-3) {
  const double base = lstm::loss(model, batch);
  const auto analytic = lstm::loss_and_grad(model, batch);
  std::vector<std::pair<std::string, std::vector<double>>> grads;
  lstm::for_each_tensor(analytic.grad, [&](const std::string& name, const double* data, std::size_t n) {
    grads.emplace_back(name, std::vector<double>(data, data + n));
  });

  GradientCheck result;
  lstm::LstmModel probe = model;
  std::size_t tensor = 0;
  lstm::for_each_tensor(probe.params, [&](const std::string& name, double* data, std::size_t n) {
    double& worst = result.worst[name];
    for (std::size_t i = 0; i < n; ++i) {
      const double saved = data[i];
      data[i] = saved + h;
      const double up = lstm::loss(probe, batch);
      data[i] = saved - h;
      const double down = lstm::loss(probe, batch);
      data[i] = saved;
      const double analytic = grads[tensor].second[i];
      double err = relative_error(analytic, (up - down) / (2.0 * h));
      if (err >= tolerance) {
        const double forward = (up - base) / h;
        const double backward = (base - down) / h;
        if (relative_error(forward, backward) >= tolerance) {
          ++result.kinks;
          err = std::min(relative_error(analytic, forward), relative_error(analytic, backward));
        }
      }
      worst = std::max(worst, err);
      result.overall = std::max(result.overall, err);
      ++result.components;
    }
    ++tensor;
  });
  return result;
}

}  // namespace tweetsense::test
