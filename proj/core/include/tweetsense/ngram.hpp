#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tweetsense/preprocess.hpp"

namespace tweetsense::ngram {

using Ngram = std::vector<std::string>;
using CountMap = std::map<Ngram, std::uint64_t>;

// Frequency tables for one n-gram order. N-grams never cross tweet
// boundaries and no padding symbols are added.
struct NgramCounts {
  int order_n = 1;
  CountMap counts;
  // (n-1)-gram occurrence counts, i.e. count(W_{k-1}) including
  // occurrences with no successor. Empty for n == 1.
  CountMap context_counts;
  // Number of counted n-grams that start with each context. This is the
  // normalizer of the conditional distribution, so P(.|c) sums to one.
  CountMap successor_totals;
  std::uint64_t total_unigrams = 0;

  friend bool operator==(const NgramCounts&, const NgramCounts&) = default;
};

// Throws std::invalid_argument unless 1 <= n <= 3.
NgramCounts count_ngrams(const std::vector<preprocess::CleanTweet>& corpus, int n);

// Adds `other` into `into`. Associative and commutative, so sharded counts
// merge to the same result in any order. Orders must match.
void merge(NgramCounts& into, const NgramCounts& other);

// count(context, word) / successor_totals(context). std::nullopt when the
// context never precedes a word. Requires order_n >= 2 and
// context.size() == order_n - 1.
std::optional<double> conditional_prob(const NgramCounts& counts, const Ngram& context,
                                       const std::string& word);

enum class Model { kUnigram, kBigram };

struct Factor {
  Ngram context;  // empty for a unigram factor
  std::string word;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  std::optional<double> value;
};

struct SentenceProb {
  std::optional<double> probability;       // nullopt if any factor is undefined
  std::vector<Factor> factors;             // in sentence order
  std::optional<std::size_t> failed_factor;  // index of the first undefined factor
};

// Chain-rule probability of a sentence. A factor is undefined when its word
// never occurs in the corpus or its context never precedes a word; a seen
// but never-observed pair gives a zero factor. The unigram model multiplies
// count(w)/total; the bigram model uses P(w_1) then P(w_i | w_{i-1}).
// Unigram needs order 1 or 2 counts, bigram needs order 2.
SentenceProb sentence_prob(const NgramCounts& counts, const std::vector<std::string>& sentence,
                           Model model);

struct PopularityEntry {
  Ngram ngram;
  std::uint64_t count = 0;

  friend bool operator==(const PopularityEntry&, const PopularityEntry&) = default;
};

struct PopularityReport {
  std::vector<PopularityEntry> entries;  // count descending, ties by n-gram text
  std::size_t k = 0;
};

std::string join(const Ngram& ngram);

PopularityReport top_k(const NgramCounts& counts, std::size_t k);

// Frequency of each lexicon token across the corpus; zero-count entries are
// kept. Throws std::invalid_argument for an empty lexicon.
PopularityReport lexicon_frequency(const std::vector<preprocess::CleanTweet>& corpus,
                                   const preprocess::WordList& lexicon);

// rank,ngram,count rows.
void write_report_csv(std::ostream& out, const PopularityReport& report);
void write_report_csv(const std::filesystem::path& path, const PopularityReport& report);

}  // namespace tweetsense::ngram
