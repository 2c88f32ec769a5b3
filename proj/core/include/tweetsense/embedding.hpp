#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tweetsense/preprocess.hpp"

namespace tweetsense::embedding {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Vocab {
 public:
  Vocab() = default;
  // Tokens in index order; throws std::invalid_argument on duplicates.
  Vocab(std::vector<std::string> tokens, std::vector<std::uint64_t> frequencies, int min_count);

  std::size_t size() const { return index_to_token_.size(); }
  bool empty() const { return index_to_token_.empty(); }
  // -1 when the token is not in the vocabulary.
  std::ptrdiff_t index_of(const std::string& token) const;
  const std::string& token(std::size_t index) const { return index_to_token_.at(index); }
  std::uint64_t frequency(std::size_t index) const { return frequencies_.at(index); }
  int min_count() const { return min_count_; }
  const std::vector<std::string>& tokens() const { return index_to_token_; }

 private:
  std::unordered_map<std::string, std::size_t> token_to_index_;
  std::vector<std::string> index_to_token_;
  std::vector<std::uint64_t> frequencies_;
  int min_count_ = 1;
};

// Tokens with frequency >= min_count, indexed by descending frequency then
// lexicographically. Throws std::invalid_argument if min_count < 1 and
// std::runtime_error if nothing survives.
Vocab build_vocab(const std::vector<preprocess::CleanTweet>& corpus, int min_count);

struct EmbeddingMatrix {
  RowMatrix vectors;  // one row per vocabulary entry
  int dim() const { return static_cast<int>(vectors.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(vectors.rows()); }
};

struct SkipGramConfig {
  int dim = 200;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

struct SkipGramResult {
  EmbeddingMatrix embeddings;
  std::vector<double> epoch_loss;  // mean negative-sampling loss per update
};

// Skip-gram with negative sampling. Input vectors start uniform in
// [-0.5/dim, 0.5/dim], output vectors at zero; the learning rate decays
// linearly to 1e-4 of its start. The effective window for each center word
// is drawn uniformly from [1, window]; negatives come from the unigram
// distribution raised to 3/4. Single-threaded and bit-reproducible for a
// given seed.
SkipGramResult train_skipgram(const std::vector<preprocess::CleanTweet>& corpus, const Vocab& vocab,
                              const SkipGramConfig& config);

struct EmbeddedSequence {
  Eigen::MatrixXd values;  // max_len x dim, zero rows past valid_length
  int valid_length = 0;
};

// Out-of-vocabulary tokens are skipped; the first max_len in-vocabulary
// tokens are kept and the rest is zero padding.
EmbeddedSequence embed_sequence(const std::vector<std::string>& tokens, const Vocab& vocab,
                                const EmbeddingMatrix& matrix, int max_len);

double cosine(const EmbeddingMatrix& matrix, std::size_t a, std::size_t b);

// Text format: "<vocab size> <dim>" header, then one line per token:
// token followed by dim values at 17 significant digits.
void save_text(std::ostream& out, const Vocab& vocab, const EmbeddingMatrix& matrix);
void save_text(const std::filesystem::path& path, const Vocab& vocab, const EmbeddingMatrix& matrix);

struct LoadedEmbeddings {
  Vocab vocab;
  EmbeddingMatrix matrix;
};
LoadedEmbeddings load_text(std::istream& in);
LoadedEmbeddings load_text(const std::filesystem::path& path);

}  // namespace tweetsense::embedding
