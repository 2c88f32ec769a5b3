#include <benchmark/benchmark.h>

#include <random>

#include "tweetsense/embedding.hpp"

namespace {

using namespace tweetsense;

void BM_SkipGramEpoch(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::geometric_distribution<int> word(0.02);
  std::uniform_int_distribution<int> len(5, 15);
  std::vector<preprocess::CleanTweet> corpus(static_cast<std::size_t>(state.range(0)));
  for (auto& t : corpus)
    for (int k = len(rng); k > 0; --k) t.tokens.push_back("w" + std::to_string(word(rng)));
  const auto vocab = embedding::build_vocab(corpus, 2);
  embedding::SkipGramConfig config;
  config.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(embedding::train_skipgram(corpus, vocab, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SkipGramEpoch)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
