#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"
#include "tweetsense/embedding.hpp"

using namespace tweetsense;
using Corpus = std::vector<preprocess::CleanTweet>;

namespace {

// x and y always share a tweet; z lives only among its own filler words.
Corpus cooccurrence_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> filler(0, 9);
  Corpus corpus;
  for (std::uint64_t i = 0; i < 300; ++i) {
    preprocess::CleanTweet t{i + 1, {}};
    if (i % 2 == 0) {
      t.tokens = {"a" + std::to_string(filler(rng)), "x", "y", "a" + std::to_string(filler(rng))};
    } else {
      t.tokens = {"b" + std::to_string(filler(rng)), "z", "b" + std::to_string(filler(rng)),
                  "b" + std::to_string(filler(rng))};
    }
    corpus.push_back(std::move(t));
  }
  return corpus;
}

embedding::SkipGramConfig small_config() {
  embedding::SkipGramConfig config;
  config.dim = 20;
  config.window = 3;
  config.epochs = 5;
  config.seed = 4;
  return config;
}

}  // namespace

TEST(BuildVocab, Examples) {
  const Corpus corpus{{1, {"a", "b", "a"}}, {2, {"a"}}};
  const auto v = embedding::build_vocab(corpus, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.index_of("a"), 0);
  EXPECT_EQ(v.index_of("b"), -1);

  const auto all = embedding::build_vocab(corpus, 1);
  EXPECT_EQ(all.tokens(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(all.frequency(0), 3u);

  EXPECT_THROW(embedding::build_vocab({}, 1), std::runtime_error);
  EXPECT_THROW(embedding::build_vocab(corpus, 0), std::invalid_argument);
}

TEST(BuildVocab, TiesAreLexicographic) {
  const auto v = embedding::build_vocab({{1, {"c", "b", "a", "c"}}}, 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"c", "a", "b"}));
}

TEST(SkipGram, ShapeAndInitRange) {
  Corpus corpus;
  for (int i = 0; i < 100; ++i) corpus.push_back({static_cast<std::uint64_t>(i), {"t" + std::to_string(i)}});
  const auto vocab = embedding::build_vocab(corpus, 1);
  ASSERT_EQ(vocab.size(), 100u);
  embedding::SkipGramConfig config;
  config.epochs = 1;
  const auto result = embedding::train_skipgram(corpus, vocab, config);
  EXPECT_EQ(result.embeddings.vectors.rows(), 100);
  EXPECT_EQ(result.embeddings.vectors.cols(), 200);
  // one-token tweets have no context, so vectors keep their initial values
  EXPECT_LE(result.embeddings.vectors.cwiseAbs().maxCoeff(), 0.5 / 200);
  EXPECT_TRUE(result.embeddings.vectors.allFinite());
}

TEST(SkipGram, Deterministic) {
  const auto corpus = cooccurrence_corpus(1);
  const auto vocab = embedding::build_vocab(corpus, 1);
  const auto a = embedding::train_skipgram(corpus, vocab, small_config());
  const auto b = embedding::train_skipgram(corpus, vocab, small_config());
  EXPECT_TRUE(a.embeddings.vectors == b.embeddings.vectors);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  auto other = small_config();
  other.seed = 5;
  EXPECT_FALSE(embedding::train_skipgram(corpus, vocab, other).embeddings.vectors ==
               a.embeddings.vectors);
}

TEST(SkipGram, CooccurringWordsAreCloser) {
  const auto corpus = cooccurrence_corpus(2);
  const auto vocab = embedding::build_vocab(corpus, 1);
  const auto result = embedding::train_skipgram(corpus, vocab, small_config());
  const auto x = static_cast<std::size_t>(vocab.index_of("x"));
  const auto y = static_cast<std::size_t>(vocab.index_of("y"));
  const auto z = static_cast<std::size_t>(vocab.index_of("z"));
  EXPECT_GT(embedding::cosine(result.embeddings, x, y), embedding::cosine(result.embeddings, x, z));
}

TEST(SkipGram, LossNonIncreasingEarly) {
  const auto corpus = cooccurrence_corpus(3);
  const auto vocab = embedding::build_vocab(corpus, 1);
  const auto result = embedding::train_skipgram(corpus, vocab, small_config());
  ASSERT_GE(result.epoch_loss.size(), 3u);
  EXPECT_LE(result.epoch_loss[1], result.epoch_loss[0]);
  EXPECT_LE(result.epoch_loss[2], result.epoch_loss[1]);
}

class EmbedSequence : public ::testing::Test {
 protected:
  void SetUp() override {
    vocab_ = embedding::Vocab({"a", "b", "c"}, {3, 2, 1}, 1);
    matrix_.vectors.resize(3, 2);
    matrix_.vectors << 1, 2, 3, 4, 5, 6;
  }
  embedding::Vocab vocab_;
  embedding::EmbeddingMatrix matrix_;
};

TEST_F(EmbedSequence, AllOov) {
  const auto s = embedding::embed_sequence({"q", "r"}, vocab_, matrix_, 4);
  EXPECT_EQ(s.valid_length, 0);
  EXPECT_EQ(s.values.rows(), 4);
  EXPECT_EQ(s.values.cols(), 2);
  EXPECT_TRUE(s.values.isZero(0.0));
}

TEST_F(EmbedSequence, ExactlyMaxLen) {
  const auto s = embedding::embed_sequence({"a", "b", "c"}, vocab_, matrix_, 3);
  EXPECT_EQ(s.valid_length, 3);
  EXPECT_TRUE(s.values == matrix_.vectors);
}

TEST_F(EmbedSequence, PaddedAfterSkippingOov) {
  const auto s = embedding::embed_sequence({"c", "zzz", "a"}, vocab_, matrix_, 5);
  EXPECT_EQ(s.valid_length, 2);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 2);
  expected.row(0) << 5, 6;
  expected.row(1) << 1, 2;
  EXPECT_TRUE(s.values == expected);
}

TEST_F(EmbedSequence, ShapeAlwaysMaxLen) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> pool{"a", "b", "c", "oov"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> len(0, 20), max_len(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tokens;
    for (int i = len(rng); i > 0; --i) tokens.push_back(pool[pick(rng)]);
    const int m = max_len(rng);
    const auto s = embedding::embed_sequence(tokens, vocab_, matrix_, m);
    EXPECT_EQ(s.values.rows(), m);
    EXPECT_EQ(s.values.cols(), 2);
    EXPECT_LE(s.valid_length, m);
  }
}

TEST(EmbeddingIo, TextRoundTripIsExact) {
  const auto corpus = cooccurrence_corpus(4);
  const auto vocab = embedding::build_vocab(corpus, 1);
  const auto result = embedding::train_skipgram(corpus, vocab, small_config());
  std::stringstream buffer;
  embedding::save_text(buffer, vocab, result.embeddings);
  const auto loaded = embedding::load_text(buffer);
  EXPECT_EQ(loaded.vocab.tokens(), vocab.tokens());
  EXPECT_TRUE(loaded.matrix.vectors == result.embeddings.vectors);
}
