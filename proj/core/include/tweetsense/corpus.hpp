#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tweetsense::corpus {

using TweetId = std::uint64_t;

// One raw tweet row. Column names and order follow the collected dataset:
// id, created_at, source, original_text, lang, favorite_count,
// retweet_count, original_author, hashtags, user_mentions, place.
struct TweetRecord {
  TweetId id = 0;
  std::string created_at;  // carried verbatim, never parsed
  std::string source;
  std::string original_text;
  std::string lang;
  std::uint64_t favorite_count = 0;
  std::uint64_t retweet_count = 0;
  std::string original_author;
  std::vector<std::string> hashtags;
  std::vector<std::string> user_mentions;
  std::optional<std::string> place;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct SkippedRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::string reason;
};

struct LoadResult {
  std::vector<TweetRecord> records;
  std::vector<SkippedRow> skipped;
};

// Column names in export order.
const std::vector<std::string>& columns();

// Reads a corpus CSV. The header is matched by name, in any order; id,
// original_text and lang are required. Rows with unparseable numbers, an
// empty text or the wrong field count are skipped and reported.
// Throws std::runtime_error for a missing file or missing required column.
LoadResult load_csv(const std::filesystem::path& path);
LoadResult read_csv(std::istream& in);

void write_csv(std::ostream& out, const std::vector<TweetRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<TweetRecord>& records);

// Keeps records with lang == "en", in order.
std::vector<TweetRecord> filter_english(const std::vector<TweetRecord>& records);

// First occurrence of each id wins; survivor order is preserved.
std::vector<TweetRecord> dedupe(const std::vector<TweetRecord>& records);

// Splits a multi-valued cell on commas, trimming whitespace and dropping
// empty items.
std::vector<std::string> split_list_cell(const std::string& cell);
std::string join_list_cell(const std::vector<std::string>& items);

}  // namespace tweetsense::corpus
