#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsense/preprocess.hpp"

namespace tweetsense::sentiment {

inline constexpr double kDefaultAlpha = 15.0;

struct SentimentScores {
  double pos = 0.0;
  double neg = 0.0;
  double neu = 1.0;
  double compound = 0.0;
};

// Three-way rating: 0.0 negative, 0.5 neutral, 1.0 positive.
class Label {
 public:
  static constexpr Label negative() { return Label(0.0); }
  static constexpr Label neutral() { return Label(0.5); }
  static constexpr Label positive() { return Label(1.0); }
  // Throws std::invalid_argument for anything other than 0.0, 0.5 or 1.0.
  static Label from_value(double value);

  constexpr double value() const { return value_; }
  constexpr bool is_neutral() const { return value_ == 0.5; }
  std::string to_string() const;  // "0.0", "0.5" or "1.0"

  friend constexpr bool operator==(Label, Label) = default;

 private:
  constexpr explicit Label(double v) : value_(v) {}
  double value_;
};

// token -> valence. Tokens are lowercased on insertion.
class ValenceLexicon {
 public:
  ValenceLexicon() = default;

  // token<TAB>valence[<TAB>...] per line; '#' comments and blank lines are
  // skipped. Throws std::runtime_error on a malformed or non-finite valence.
  static ValenceLexicon parse(std::string_view text);
  static ValenceLexicon load(const std::filesystem::path& path);
  static ValenceLexicon default_lexicon();

  void set(std::string_view token, double valence);
  const double* find(std::string_view token) const;
  std::size_t size() const { return entries_.size(); }

  // Keys passed through the Porter stemmer so lookups match preprocessed
  // tokens. Words sharing a stem get the mean of their valences.
  ValenceLexicon stemmed() const;
  ValenceLexicon scaled(double factor) const;

 private:
  std::unordered_map<std::string, double> entries_;
};

// S = sum of valences of tokens found in the lexicon;
// compound = S / sqrt(S^2 + alpha). pos/neg/neu are the fractions of tokens
// with positive, negative, and zero-or-missing valence.
SentimentScores score(const preprocess::CleanTweet& tweet, const ValenceLexicon& lexicon,
                      double alpha = kDefaultAlpha);

Label classify(double compound);

struct ClassDistribution {
  std::size_t count = 0;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
  std::size_t neutral_count = 0;
  double positive = 0.0;  // percentages
  double negative = 0.0;
  double neutral = 0.0;
  bool empty() const { return count == 0; }
};

ClassDistribution class_distribution(const std::vector<Label>& labels);

struct ScoredTweet {
  corpus::TweetId tweet_id = 0;
  SentimentScores scores;
  Label label = Label::neutral();
};

// tweet_id,pos,neg,neu,compound,label
void write_scored_csv(std::ostream& out, const std::vector<ScoredTweet>& rows);
void write_scored_csv(const std::filesystem::path& path, const std::vector<ScoredTweet>& rows);
std::vector<ScoredTweet> read_scored_csv(const std::filesystem::path& path);

// class,count,percent (3 rows)
void write_distribution_csv(const std::filesystem::path& path, const ClassDistribution& dist);

}  // namespace tweetsense::sentiment
