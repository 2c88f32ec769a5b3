#include <benchmark/benchmark.h>

#include <random>

#include "tweetsense/ngram.hpp"

namespace {

std::vector<tweetsense::preprocess::CleanTweet> synthetic_corpus(std::size_t tweets) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(5, 20);
  std::geometric_distribution<int> word(0.01);
  std::vector<tweetsense::preprocess::CleanTweet> corpus(tweets);
  for (std::size_t i = 0; i < tweets; ++i) {
    corpus[i].tweet_id = i + 1;
    for (int k = len(rng); k > 0; --k) corpus[i].tokens.push_back("w" + std::to_string(word(rng)));
  }
  return corpus;
}

void BM_CountNgrams(benchmark::State& state) {
  const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(tweetsense::ngram::count_ngrams(corpus, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountNgrams)->ArgsProduct({{1000, 10000}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
