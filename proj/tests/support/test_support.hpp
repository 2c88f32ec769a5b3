#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tweetsense/preprocess.hpp"

namespace tweetsense::test {

namespace fs = std::filesystem;

inline fs::path test_data_dir() { return TWEETSENSE_TEST_DATA_DIR; }
inline fs::path data_dir() { return TWEETSENSE_DATA_DIR; }
inline fs::path fixture_corpus() { return data_dir() / "fixtures" / "covid_tweets_200.csv"; }

// Unique directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("tweetsense_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Random corpus of up to max_tweets tweets over a vocabulary of at most
// vocab_size single-letter-ish tokens.
inline std::vector<preprocess::CleanTweet> random_corpus(std::mt19937_64& rng, int max_tweets,
                                                         int vocab_size, int max_len) {
  std::uniform_int_distribution<int> n_tweets(1, max_tweets);
  std::uniform_int_distribution<int> length(0, max_len);
  std::uniform_int_distribution<int> word(0, vocab_size - 1);
  std::vector<preprocess::CleanTweet> corpus(static_cast<std::size_t>(n_tweets(rng)));
  std::uint64_t id = 1;
  for (auto& t : corpus) {
    t.tweet_id = id++;
    const int len = length(rng);
    for (int i = 0; i < len; ++i) t.tokens.push_back("w" + std::to_string(word(rng)));
  }
  return corpus;
}

// |a - n| / max(|a|, |n|, floor): a relative error that degrades to an
// absolute tolerance for components too small to difference reliably.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

}  // namespace tweetsense::test
