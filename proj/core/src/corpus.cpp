#include "tweetsense/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tweetsense/csv.hpp"

namespace tweetsense::corpus {
namespace {

enum Column : std::size_t {
  kId,
  kCreatedAt,
  kSource,
  kOriginalText,
  kLang,
  kFavoriteCount,
  kRetweetCount,
  kOriginalAuthor,
  kHashtags,
  kUserMentions,
  kPlace,
  kColumnCount
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<std::uint64_t> parse_count(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_blank(const csv::Row& row) { return row.size() == 1 && trim(row[0]).empty(); }

}  // namespace

const std::vector<std::string>& columns() {
  static const std::vector<std::string> names = {
      "id",           "created_at",      "source",   "original_text",
      "lang",         "favorite_count",  "retweet_count",
      "original_author", "hashtags",     "user_mentions", "place"};
  return names;
}

std::vector<std::string> split_list_cell(const std::string& cell) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= cell.size()) {
    const auto comma = cell.find(',', start);
    const auto end = comma == std::string::npos ? cell.size() : comma;
    std::string item = trim(std::string_view(cell).substr(start, end - start));
    if (!item.empty()) items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string join_list_cell(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

LoadResult read_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw std::runtime_error("corpus: missing header row");

  // Strip a UTF-8 byte-order mark from the first column name.
  if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) {
    header->front().erase(0, 3);
  }

  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < header->size(); ++i) by_name.emplace(trim((*header)[i]), i);

  std::array<std::optional<std::size_t>, kColumnCount> position{};
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    if (auto it = by_name.find(columns()[c]); it != by_name.end()) position[c] = it->second;
  }
  for (Column required : {kId, kOriginalText, kLang}) {
    if (!position[required]) {
      throw std::runtime_error("corpus: missing required column '" + columns()[required] + "'");
    }
  }

  LoadResult result;
  while (auto row = reader.next()) {
    if (is_blank(*row)) continue;
    const std::size_t line = reader.line();
    if (row->size() != header->size()) {
      result.skipped.push_back({line, "expected " + std::to_string(header->size()) +
                                          " fields, found " + std::to_string(row->size())});
      continue;
    }
    auto cell = [&](Column c) -> const std::string& {
      static const std::string empty;
      return position[c] ? (*row)[*position[c]] : empty;
    };

    TweetRecord record;
    const auto id = parse_count(cell(kId));
    if (!id) {
      result.skipped.push_back({line, "unparseable id '" + cell(kId) + "'"});
      continue;
    }
    record.id = *id;

    bool numbers_ok = true;
    for (auto [column, target] : {std::pair{kFavoriteCount, &record.favorite_count},
                                  std::pair{kRetweetCount, &record.retweet_count}}) {
      if (!position[column]) continue;
      const auto value = parse_count(cell(column));
      if (!value) {
        result.skipped.push_back(
            {line, "unparseable " + columns()[column] + " '" + cell(column) + "'"});
        numbers_ok = false;
        break;
      }
      *target = *value;
    }
    if (!numbers_ok) continue;

    record.original_text = cell(kOriginalText);
    if (trim(record.original_text).empty()) {
      result.skipped.push_back({line, "empty original_text"});
      continue;
    }
    record.created_at = cell(kCreatedAt);
    record.source = cell(kSource);
    record.lang = trim(cell(kLang));
    record.original_author = cell(kOriginalAuthor);
    record.hashtags = split_list_cell(cell(kHashtags));
    record.user_mentions = split_list_cell(cell(kUserMentions));
    if (!cell(kPlace).empty()) record.place = cell(kPlace);
    result.records.push_back(std::move(record));
  }
  return result;
}

LoadResult load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("corpus: cannot open '" + path.string() + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const std::vector<TweetRecord>& records) {
  csv::write_row(out, columns());
  for (const auto& r : records) {
    csv::write_row(out, {std::to_string(r.id), r.created_at, r.source, r.original_text, r.lang,
                         std::to_string(r.favorite_count), std::to_string(r.retweet_count),
                         r.original_author, join_list_cell(r.hashtags),
                         join_list_cell(r.user_mentions), r.place.value_or("")});
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<TweetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("corpus: cannot write '" + path.string() + "'");
  write_csv(out, records);
}

std::vector<TweetRecord> filter_english(const std::vector<TweetRecord>& records) {
  std::vector<TweetRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const TweetRecord& r) { return r.lang == "en"; });
  return out;
}

std::vector<TweetRecord> dedupe(const std::vector<TweetRecord>& records) {
  std::unordered_set<TweetId> seen;
  std::vector<TweetRecord> out;
  for (const auto& r : records) {
    if (seen.insert(r.id).second) out.push_back(r);
  }
  return out;
}

}  // namespace tweetsense::corpus
