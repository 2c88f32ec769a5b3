#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tweetsense::pipeline {

namespace fs = std::filesystem;

struct PathOptions {
  fs::path input;            // raw tweet CSV
  fs::path stopwords;        // empty: built-in list
  fs::path covid_lexicon;    // empty: built-in list
  fs::path valence_lexicon;  // empty: built-in lexicon
  fs::path output_dir = "tweetsense_out";
};

struct NgramOptions {
  int top = 50;
};

struct SentimentOptions {
  double alpha = 15.0;
};

struct EmbedOptions {
  int dim = 200;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  int min_count = 2;
  int max_len = 50;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
};

struct TrainOptions {
  int epochs = 30;
  int batch_size = 32;
  double split = 0.8;
  std::uint64_t seed = 1;
  int hidden = 64;
  double learning_rate = 1e-3;
};

struct PipelineConfig {
  PathOptions paths;
  NgramOptions ngram;
  SentimentOptions sentiment;
  EmbedOptions embed;
  TrainOptions train;
};

// Invalid configuration; what() joins the field-level diagnostics.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Reads an INI file with [paths], [ngram], [sentiment], [embed] and [train]
// sections over the defaults in `base`. Relative paths resolve against the
// config file's directory. Unknown sections or keys and unparseable values
// raise ConfigError.
PipelineConfig load_config(const fs::path& path, PipelineConfig base = {});

// Field-level problems with option values ("train.split: must be in (0, 1)").
std::vector<std::string> validate_options(const PipelineConfig& config);

// validate_options plus existence checks on every referenced input path.
// Throws ConfigError when anything is wrong.
void validate(const PipelineConfig& config);

// Each stage reads its input artifact(s), writes its output artifact(s) and
// returns a one-line summary.
std::string ingest(const fs::path& in, const fs::path& out);
std::string preprocess(const fs::path& in, const fs::path& stopwords, const fs::path& out);
std::string ngram(const fs::path& tokens, int n, int top, const fs::path& out);
std::string lexicon_frequency(const fs::path& tokens, const fs::path& lexicon, const fs::path& out);
std::string sentiment(const fs::path& tokens, const fs::path& lexicon, double alpha,
                      const fs::path& out, const fs::path& distribution_out);
std::string embed(const fs::path& tokens, const EmbedOptions& options, const fs::path& out);

struct TrainArtifacts {
  fs::path checkpoint;
  fs::path epoch_log;
  fs::path validation;  // tweet_id,tokens,label rows of the held-out split
};
std::string train(const fs::path& tokens, const fs::path& scored, const fs::path& embeddings,
                  const EmbedOptions& embed_options, const TrainOptions& options,
                  const TrainArtifacts& out);
std::string evaluate(const fs::path& checkpoint, const fs::path& embeddings,
                     const fs::path& labeled, const fs::path& out);

// Artifact file names inside the output directory.
namespace artifacts {
inline constexpr const char* kCorpus = "corpus.csv";
inline constexpr const char* kTokens = "tokens.csv";
inline constexpr const char* kUnigrams = "ngram_1.csv";
inline constexpr const char* kBigrams = "ngram_2.csv";
inline constexpr const char* kTrigrams = "ngram_3.csv";
inline constexpr const char* kLexiconFrequency = "lexicon_frequency.csv";
inline constexpr const char* kScored = "scored.csv";
inline constexpr const char* kDistribution = "distribution.csv";
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kCheckpoint = "model.ckpt";
inline constexpr const char* kEpochLog = "epoch_log.csv";
inline constexpr const char* kValidation = "validation.csv";
inline constexpr const char* kReport = "report.json";
}  // namespace artifacts

// Runs every stage in order into config.paths.output_dir. Returns the
// per-stage summaries.
std::vector<std::string> run_pipeline(const PipelineConfig& config);

}  // namespace tweetsense::pipeline
