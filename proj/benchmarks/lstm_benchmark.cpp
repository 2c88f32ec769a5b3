#include <benchmark/benchmark.h>

#include <random>

#include "tweetsense/lstm.hpp"

namespace {

using namespace tweetsense;

std::vector<lstm::Sample> batch(const lstm::ModelConfig& config, std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> value(0.0, 0.1);
  std::vector<lstm::Sample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].valid_length = 12;
    samples[i].sequence = Eigen::MatrixXd::Zero(config.max_len, config.input_dim);
    for (int t = 0; t < 12; ++t)
      for (int d = 0; d < config.input_dim; ++d) samples[i].sequence(t, d) = value(rng);
    samples[i].label = i % 2 ? sentiment::Label::positive() : sentiment::Label::negative();
  }
  return samples;
}

void BM_Forward(benchmark::State& state) {
  const lstm::ModelConfig config;
  const auto model = lstm::init_model(config, 1);
  const auto samples = batch(config, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(lstm::forward(model, samples[0].sequence, samples[0].valid_length));
}
BENCHMARK(BM_Forward)->Unit(benchmark::kMicrosecond);

void BM_LossAndGradBatch32(benchmark::State& state) {
  const lstm::ModelConfig config;
  const auto model = lstm::init_model(config, 1);
  const auto samples = batch(config, 32);
  for (auto _ : state) benchmark::DoNotOptimize(lstm::loss_and_grad(model, samples));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_LossAndGradBatch32)->Unit(benchmark::kMillisecond);

}  // namespace
