#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tweetsense/corpus.hpp"

namespace tweetsense::preprocess {

// Tweet id paired with its normalized, stemmed token sequence. Tokens are
// non-empty, lowercase, whitespace-free and never stopwords.
struct CleanTweet {
  corpus::TweetId tweet_id = 0;
  std::vector<std::string> tokens;

  friend bool operator==(const CleanTweet&, const CleanTweet&) = default;
};

// Case-insensitive word set, loaded from a one-word-per-line file. Lines
// starting with '#' and blank lines are ignored.
class WordList {
 public:
  WordList() = default;
  explicit WordList(std::vector<std::string> words);

  static WordList parse(std::string_view text);
  static WordList load(const std::filesystem::path& path);
  static WordList default_stopwords();

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  // Sorted copy of the entries.
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> words_;
};

// Drops URLs, @mentions and a leading "RT" marker, turns every character
// other than ASCII letters, digits and intra-word apostrophes into a
// separator ('#' included, so hashtag bodies survive), collapses
// whitespace and lowercases. Idempotent.
std::string clean_text(std::string_view raw);

std::vector<std::string> tokenize(std::string_view cleaned);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const WordList& stopwords);

std::string stem(std::string_view token);

// clean_text -> tokenize -> remove_stopwords -> stem. Stems that collapse
// onto a stopword ("ones" -> "on") are dropped as well.
CleanTweet preprocess(const corpus::TweetRecord& record, const WordList& stopwords);

std::vector<CleanTweet> preprocess_all(const std::vector<corpus::TweetRecord>& records,
                                       const WordList& stopwords);

// tweet_id,tokens CSV with tokens joined by single spaces.
void write_tokens_csv(std::ostream& out, const std::vector<CleanTweet>& tweets);
void write_tokens_csv(const std::filesystem::path& path, const std::vector<CleanTweet>& tweets);
std::vector<CleanTweet> read_tokens_csv(std::istream& in);
std::vector<CleanTweet> read_tokens_csv(const std::filesystem::path& path);

}  // namespace tweetsense::preprocess
