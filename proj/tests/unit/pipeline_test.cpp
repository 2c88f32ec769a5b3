#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tweetsense/pipeline.hpp"

using namespace tweetsense;
using test::TempDir;
namespace fs = std::filesystem;

namespace {

pipeline::PipelineConfig small_config(const fs::path& out_dir) {
  pipeline::PipelineConfig config;
  config.paths.input = test::fixture_corpus();
  config.paths.output_dir = out_dir;
  config.embed.dim = 16;
  config.embed.epochs = 2;
  config.train.epochs = 3;
  config.train.hidden = 8;
  return config;
}

const std::vector<std::string> kArtifacts{
    pipeline::artifacts::kCorpus,     pipeline::artifacts::kTokens,
    pipeline::artifacts::kUnigrams,   pipeline::artifacts::kBigrams,
    pipeline::artifacts::kTrigrams,   pipeline::artifacts::kLexiconFrequency,
    pipeline::artifacts::kScored,     pipeline::artifacts::kDistribution,
    pipeline::artifacts::kEmbeddings, pipeline::artifacts::kCheckpoint,
    pipeline::artifacts::kEpochLog,   pipeline::artifacts::kValidation,
    pipeline::artifacts::kReport};

}  // namespace

TEST(LoadConfig, ReadsSectionsAndResolvesPaths) {
  TempDir dir;
  test::write_file(dir / "run.ini",
                   "[paths]\ninput = tweets.csv\noutput_dir = out\n"
                   "[ngram]\ntop = 20\n[embed]\ndim = 32\nseed = 7\n"
                   "[train]\nepochs = 4\nsplit = 0.75\n");
  const auto config = pipeline::load_config(dir / "run.ini");
  EXPECT_EQ(config.paths.input, dir.path() / "tweets.csv");
  EXPECT_EQ(config.paths.output_dir, dir.path() / "out");
  EXPECT_EQ(config.ngram.top, 20);
  EXPECT_EQ(config.embed.dim, 32);
  EXPECT_EQ(config.embed.seed, 7u);
  EXPECT_EQ(config.embed.window, 5);
  EXPECT_EQ(config.train.epochs, 4);
  EXPECT_DOUBLE_EQ(config.train.split, 0.75);
  EXPECT_EQ(config.train.batch_size, 32);
}

TEST(LoadConfig, UnknownKeyAndBadValueAreDiagnosed) {
  TempDir dir;
  test::write_file(dir / "bad.ini", "[train]\nepochz = 3\nsplit = abc\n");
  try {
    pipeline::load_config(dir / "bad.ini");
    FAIL() << "expected ConfigError";
  } catch (const pipeline::ConfigError& e) {
    ASSERT_EQ(e.diagnostics().size(), 2u);
    EXPECT_NE(std::string(e.what()).find("train.epochz"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("train.split"), std::string::npos);
  }
}

TEST(LoadConfig, MissingFile) {
  EXPECT_THROW(pipeline::load_config("/nonexistent/run.ini"), pipeline::ConfigError);
}

TEST(Validate, FieldDiagnostics) {
  pipeline::PipelineConfig config;
  config.train.split = 1.5;
  config.embed.dim = 0;
  config.train.epochs = 0;
  const auto diags = pipeline::validate_options(config);
  EXPECT_EQ(diags.size(), 3u);
  config = {};
  config.paths.input = "/nonexistent/tweets.csv";
  EXPECT_THROW(pipeline::validate(config), pipeline::ConfigError);
}

TEST(RunPipeline, WritesEveryArtifactDeterministically) {
  TempDir a, b;
  const auto log = pipeline::run_pipeline(small_config(a.path()));
  EXPECT_EQ(log.size(), 10u);
  pipeline::run_pipeline(small_config(b.path()));
  for (const auto& name : kArtifacts) {
    ASSERT_TRUE(fs::is_regular_file(a / name)) << name;
    EXPECT_EQ(test::read_file(a / name), test::read_file(b / name)) << name;
  }
}

TEST(RunPipeline, ReportsHaveRequestedLength) {
  TempDir dir;
  auto config = small_config(dir.path());
  config.ngram.top = 50;
  pipeline::run_pipeline(config);
  const auto bigrams = test::read_file(dir / pipeline::artifacts::kBigrams);
  EXPECT_EQ(std::count(bigrams.begin(), bigrams.end(), '\n'), 51);
  const auto epochs = test::read_file(dir / pipeline::artifacts::kEpochLog);
  EXPECT_EQ(std::count(epochs.begin(), epochs.end(), '\n'), 4);
}
