#include "tweetsense/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tweetsense::embedding {
namespace {

constexpr double kMinLearningRateFraction = 1e-4;
constexpr double kMaxLogit = 30.0;

double sigmoid(double x) {
  x = std::clamp(x, -kMaxLogit, kMaxLogit);
  return 1.0 / (1.0 + std::exp(-x));
}

// Cumulative unigram^0.75 weights for inverse-CDF sampling.
std::vector<double> noise_cdf(const Vocab& vocab) {
  std::vector<double> cdf(vocab.size());
  double total = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    total += std::pow(static_cast<double>(vocab.frequency(i)), 0.75);
    cdf[i] = total;
  }
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return cdf;
}

std::size_t sample_noise(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// Maps a 64-bit draw to [0, 1) without going through the
// implementation-defined std distributions.
double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(unit(rng()) * static_cast<double>(n));
}

}  // namespace

Vocab::Vocab(std::vector<std::string> tokens, std::vector<std::uint64_t> frequencies, int min_count)
    : index_to_token_(std::move(tokens)), frequencies_(std::move(frequencies)), min_count_(min_count) {
  if (frequencies_.size() != index_to_token_.size()) {
    throw std::invalid_argument("Vocab: token and frequency counts differ");
  }
  for (std::size_t i = 0; i < index_to_token_.size(); ++i) {
    if (!token_to_index_.emplace(index_to_token_[i], i).second) {
      throw std::invalid_argument("Vocab: duplicate token '" + index_to_token_[i] + "'");
    }
  }
}

std::ptrdiff_t Vocab::index_of(const std::string& token) const {
  const auto it = token_to_index_.find(token);
  return it == token_to_index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Vocab build_vocab(const std::vector<preprocess::CleanTweet>& corpus, int min_count) {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  std::map<std::string, std::uint64_t> freq;
  for (const auto& tweet : corpus) {
    for (const auto& t : tweet.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [token, count] : freq) {
    if (count >= static_cast<std::uint64_t>(min_count)) kept.emplace_back(token, count);
  }
  if (kept.empty()) {
    throw std::runtime_error("build_vocab: no token reaches min_count=" + std::to_string(min_count) +
                             " (" + std::to_string(freq.size()) + " distinct tokens in corpus)");
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  for (auto& [token, count] : kept) {
    tokens.push_back(std::move(token));
    counts.push_back(count);
  }
  return Vocab(std::move(tokens), std::move(counts), min_count);
}

SkipGramResult train_skipgram(const std::vector<preprocess::CleanTweet>& corpus, const Vocab& vocab,
                              const SkipGramConfig& config) {
  if (vocab.empty()) throw std::invalid_argument("train_skipgram: empty vocabulary");
  if (config.dim < 1) throw std::invalid_argument("train_skipgram: dim must be >= 1");
  if (config.window < 1 || config.negatives < 0 || config.epochs < 0) {
    throw std::invalid_argument("train_skipgram: window >= 1, negatives >= 0, epochs >= 0 required");
  }

  std::mt19937_64 rng(config.seed);
  const auto v = static_cast<Eigen::Index>(vocab.size());
  const auto d = static_cast<Eigen::Index>(config.dim);

  RowMatrix input(v, d);
  const double scale = 0.5 / static_cast<double>(config.dim);
  for (Eigen::Index i = 0; i < input.size(); ++i) {
    input.data()[i] = (2.0 * unit(rng()) - 1.0) * scale;
  }
  RowMatrix output = RowMatrix::Zero(v, d);

  // Sentences as vocabulary indices, OOV dropped.
  std::vector<std::vector<std::size_t>> sentences;
  std::uint64_t total_words = 0;
  for (const auto& tweet : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& t : tweet.tokens) {
      if (auto idx = vocab.index_of(t); idx >= 0) ids.push_back(static_cast<std::size_t>(idx));
    }
    total_words += ids.size();
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }

  const auto cdf = noise_cdf(vocab);
  const double total_steps = static_cast<double>(total_words) * std::max(config.epochs, 1);
  double processed = 0.0;
  Eigen::VectorXd grad_center(d);

  SkipGramResult result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::uint64_t updates = 0;
    for (const auto& sentence : sentences) {
      const auto len = static_cast<std::ptrdiff_t>(sentence.size());
      for (std::ptrdiff_t pos = 0; pos < len; ++pos, processed += 1.0) {
        const double lr = config.learning_rate *
                          std::max(kMinLearningRateFraction, 1.0 - processed / total_steps);
        const auto reduced = static_cast<std::ptrdiff_t>(bounded(rng, config.window)) + 1;
        const std::size_t center = sentence[pos];
        for (std::ptrdiff_t c = pos - reduced; c <= pos + reduced; ++c) {
          if (c < 0 || c >= len || c == pos) continue;
          const std::size_t context = sentence[c];
          grad_center.setZero();
          auto center_vec = input.row(center);
          for (int k = 0; k <= config.negatives; ++k) {
            std::size_t target = context;
            double label = 1.0;
            if (k > 0) {
              target = sample_noise(cdf, unit(rng()));
              if (target == context) continue;
              label = 0.0;
            }
            auto out_vec = output.row(target);
            const double p = sigmoid(center_vec.dot(out_vec));
            loss_sum -= std::log(std::max(label > 0 ? p : 1.0 - p, 1e-300));
            const double g = (label - p) * lr;
            grad_center.noalias() += g * out_vec.transpose();
            out_vec.noalias() += g * center_vec;
          }
          center_vec.noalias() += grad_center.transpose();
          ++updates;
        }
      }
    }
    result.epoch_loss.push_back(updates ? loss_sum / static_cast<double>(updates) : 0.0);
  }
  result.embeddings.vectors = std::move(input);
  return result;
}

EmbeddedSequence embed_sequence(const std::vector<std::string>& tokens, const Vocab& vocab,
                                const EmbeddingMatrix& matrix, int max_len) {
  if (max_len < 1) throw std::invalid_argument("embed_sequence: max_len must be >= 1");
  EmbeddedSequence seq;
  seq.values = Eigen::MatrixXd::Zero(max_len, matrix.dim());
  for (const auto& t : tokens) {
    if (seq.valid_length == max_len) break;
    const auto idx = vocab.index_of(t);
    if (idx < 0) continue;
    seq.values.row(seq.valid_length++) = matrix.vectors.row(idx);
  }
  return seq;
}

double cosine(const EmbeddingMatrix& matrix, std::size_t a, std::size_t b) {
  const auto ra = matrix.vectors.row(static_cast<Eigen::Index>(a));
  const auto rb = matrix.vectors.row(static_cast<Eigen::Index>(b));
  const double denom = ra.norm() * rb.norm();
  return denom == 0.0 ? 0.0 : ra.dot(rb) / denom;
}

void save_text(std::ostream& out, const Vocab& vocab, const EmbeddingMatrix& matrix) {
  if (matrix.rows() != vocab.size()) {
    throw std::invalid_argument("save_text: matrix rows do not match vocabulary size");
  }
  out << vocab.size() << ' ' << matrix.dim() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.token(i);
    for (int j = 0; j < matrix.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", matrix.vectors(static_cast<Eigen::Index>(i), j));
      out << buf;
    }
    out << '\n';
  }
}

void save_text(const std::filesystem::path& path, const Vocab& vocab, const EmbeddingMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  save_text(out, vocab, matrix);
}

LoadedEmbeddings load_text(std::istream& in) {
  std::size_t rows = 0;
  int dim = 0;
  if (!(in >> rows >> dim) || dim < 1) throw std::runtime_error("embeddings: bad header");
  std::vector<std::string> tokens(rows);
  RowMatrix vectors(static_cast<Eigen::Index>(rows), dim);
  std::string value;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(in >> tokens[i])) throw std::runtime_error("embeddings: truncated file");
    for (int j = 0; j < dim; ++j) {
      if (!(in >> value)) throw std::runtime_error("embeddings: truncated row for '" + tokens[i] + "'");
      char* end = nullptr;
      const double x = std::strtod(value.c_str(), &end);
      if (*end != '\0' || !std::isfinite(x)) {
        throw std::runtime_error("embeddings: bad value '" + value + "'");
      }
      vectors(static_cast<Eigen::Index>(i), j) = x;
    }
  }
  // Saved files do not carry frequencies; rank order stands in for them.
  std::vector<std::uint64_t> freq(rows);
  for (std::size_t i = 0; i < rows; ++i) freq[i] = rows - i;
  return {Vocab(std::move(tokens), std::move(freq), 1), EmbeddingMatrix{std::move(vectors)}};
}

LoadedEmbeddings load_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return load_text(in);
}

}  // namespace tweetsense::embedding
