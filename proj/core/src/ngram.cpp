#include "tweetsense/ngram.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "tweetsense/csv.hpp"

namespace tweetsense::ngram {
namespace {

void add_counts(CountMap& into, const CountMap& from) {
  for (const auto& [key, value] : from) into[key] += value;
}

std::uint64_t lookup(const CountMap& map, const Ngram& key) {
  const auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

void sort_entries(std::vector<PopularityEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const PopularityEntry& a, const PopularityEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return join(a.ngram) < join(b.ngram);
  });
}

}  // namespace

NgramCounts count_ngrams(const std::vector<preprocess::CleanTweet>& corpus, int n) {
  if (n < 1 || n > 3) {
    throw std::invalid_argument("count_ngrams: n must be 1, 2 or 3 (got " + std::to_string(n) + ")");
  }
  const auto width = static_cast<std::size_t>(n);
  NgramCounts result;
  result.order_n = n;
  for (const auto& tweet : corpus) {
    const auto& t = tweet.tokens;
    result.total_unigrams += t.size();
    if (t.size() >= width) {
      for (std::size_t i = 0; i + width <= t.size(); ++i) {
        Ngram gram(t.begin() + i, t.begin() + i + width);
        if (n >= 2) ++result.successor_totals[Ngram(gram.begin(), gram.end() - 1)];
        ++result.counts[std::move(gram)];
      }
    }
    if (n >= 2 && t.size() >= width - 1) {
      for (std::size_t i = 0; i + width - 1 <= t.size(); ++i) {
        ++result.context_counts[Ngram(t.begin() + i, t.begin() + i + width - 1)];
      }
    }
  }
  return result;
}

void merge(NgramCounts& into, const NgramCounts& other) {
  if (into.order_n != other.order_n) {
    throw std::invalid_argument("merge: n-gram orders differ");
  }
  add_counts(into.counts, other.counts);
  add_counts(into.context_counts, other.context_counts);
  add_counts(into.successor_totals, other.successor_totals);
  into.total_unigrams += other.total_unigrams;
}

std::optional<double> conditional_prob(const NgramCounts& counts, const Ngram& context,
                                       const std::string& word) {
  if (counts.order_n < 2) {
    throw std::invalid_argument("conditional_prob: counts must have order >= 2");
  }
  if (context.size() != static_cast<std::size_t>(counts.order_n - 1)) {
    throw std::invalid_argument("conditional_prob: context length must be n-1");
  }
  const std::uint64_t denominator = lookup(counts.successor_totals, context);
  if (denominator == 0) return std::nullopt;
  Ngram gram = context;
  gram.push_back(word);
  return static_cast<double>(lookup(counts.counts, gram)) / static_cast<double>(denominator);
}

SentenceProb sentence_prob(const NgramCounts& counts, const std::vector<std::string>& sentence,
                           Model model) {
  if (sentence.empty()) throw std::invalid_argument("sentence_prob: empty sentence");
  if (model == Model::kBigram && counts.order_n != 2) {
    throw std::invalid_argument("sentence_prob: bigram model needs order-2 counts");
  }
  if (model == Model::kUnigram && counts.order_n > 2) {
    throw std::invalid_argument("sentence_prob: unigram model needs order-1 or order-2 counts");
  }
  const CountMap& unigrams = counts.order_n == 1 ? counts.counts : counts.context_counts;

  auto unigram_factor = [&](const std::string& w) {
    Factor f;
    f.word = w;
    f.numerator = lookup(unigrams, {w});
    f.denominator = counts.total_unigrams;
    if (f.numerator > 0) f.value = static_cast<double>(f.numerator) / static_cast<double>(f.denominator);
    return f;
  };

  SentenceProb result;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (model == Model::kUnigram || i == 0) {
      result.factors.push_back(unigram_factor(sentence[i]));
    } else {
      Factor f;
      f.context = {sentence[i - 1]};
      f.word = sentence[i];
      f.numerator = lookup(counts.counts, {sentence[i - 1], sentence[i]});
      f.denominator = lookup(counts.successor_totals, f.context);
      // An out-of-corpus word is undefined even after a seen context.
      if (f.denominator > 0 && lookup(unigrams, {sentence[i]}) > 0) {
        f.value = static_cast<double>(f.numerator) / static_cast<double>(f.denominator);
      }
      result.factors.push_back(std::move(f));
    }
  }

  double product = 1.0;
  for (std::size_t i = 0; i < result.factors.size(); ++i) {
    if (!result.factors[i].value) {
      result.failed_factor = i;
      return result;
    }
    product *= *result.factors[i].value;
  }
  result.probability = product;
  return result;
}

std::string join(const Ngram& ngram) {
  std::string out;
  for (std::size_t i = 0; i < ngram.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += ngram[i];
  }
  return out;
}

PopularityReport top_k(const NgramCounts& counts, std::size_t k) {
  std::vector<PopularityEntry> entries;
  entries.reserve(counts.counts.size());
  for (const auto& [gram, count] : counts.counts) entries.push_back({gram, count});
  sort_entries(entries);
  if (entries.size() > k) entries.resize(k);
  return {std::move(entries), k};
}

PopularityReport lexicon_frequency(const std::vector<preprocess::CleanTweet>& corpus,
                                   const preprocess::WordList& lexicon) {
  if (lexicon.size() == 0) throw std::invalid_argument("lexicon_frequency: empty lexicon");
  std::map<std::string, std::uint64_t> tally;
  for (const auto& word : lexicon.sorted()) tally.emplace(word, 0);
  for (const auto& tweet : corpus) {
    for (const auto& token : tweet.tokens) {
      if (auto it = tally.find(token); it != tally.end()) ++it->second;
    }
  }
  std::vector<PopularityEntry> entries;
  for (const auto& [word, count] : tally) entries.push_back({{word}, count});
  sort_entries(entries);
  return {std::move(entries), tally.size()};
}

void write_report_csv(std::ostream& out, const PopularityReport& report) {
  csv::write_row(out, {"rank", "ngram", "count"});
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    csv::write_row(out, {std::to_string(i + 1), join(report.entries[i].ngram),
                         std::to_string(report.entries[i].count)});
  }
}

void write_report_csv(const std::filesystem::path& path, const PopularityReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_report_csv(out, report);
}

}  // namespace tweetsense::ngram
