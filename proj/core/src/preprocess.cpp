#include "tweetsense/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tweetsense/csv.hpp"
#include "tweetsense/default_resources.hpp"
#include "tweetsense/porter_stemmer.hpp"

namespace tweetsense::preprocess {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), to_lower);
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) parts.push_back(s.substr(start, i - start));
  }
  return parts;
}

bool is_url_chunk(std::string_view chunk) {
  const std::string lower = lowercase(chunk);
  return lower.find("http") != std::string::npos || lower.find("www.") != std::string::npos;
}

bool is_mention_char(char c) { return is_alnum(c) || c == '_'; }

}  // namespace

WordList::WordList(std::vector<std::string> words) {
  for (auto& w : words) words_.insert(lowercase(w));
}

WordList WordList::parse(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    words.push_back(line.substr(first, last - first + 1));
  }
  return WordList(std::move(words));
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open word list '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

WordList WordList::default_stopwords() { return parse(resources::default_stopwords()); }

bool WordList::contains(std::string_view word) const {
  return words_.contains(lowercase(word));
}

std::vector<std::string> WordList::sorted() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string clean_text(std::string_view raw) {
  // Typographic apostrophe (U+2019) counts as an apostrophe.
  std::string text;
  text.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.substr(i, 3) == "\xE2\x80\x99") {
      text.push_back('\'');
      i += 2;
    } else {
      text.push_back(raw[i]);
    }
  }

  auto chunks = split_ws(text);
  if (!chunks.empty() && (chunks.front() == "RT" || chunks.front() == "RT:")) {
    chunks.erase(chunks.begin());
  }

  std::string kept;
  for (auto chunk : chunks) {
    if (is_url_chunk(chunk)) continue;
    // Remove @handles anywhere in the chunk.
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (chunk[i] == '@') {
        while (i + 1 < chunk.size() && is_mention_char(chunk[i + 1])) ++i;
        kept.push_back(' ');
      } else {
        kept.push_back(chunk[i]);
      }
    }
    kept.push_back(' ');
  }

  std::string mapped(kept.size(), ' ');
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const char c = kept[i];
    if (is_alnum(c)) {
      mapped[i] = to_lower(c);
    } else if (c == '\'' && i > 0 && i + 1 < kept.size() && is_alnum(kept[i - 1]) &&
               is_alnum(kept[i + 1])) {
      mapped[i] = '\'';
    }
  }

  std::string out;
  for (auto token : split_ws(mapped)) {
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view cleaned) {
  std::vector<std::string> tokens;
  for (auto part : split_ws(cleaned)) tokens.emplace_back(part);
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const WordList& stopwords) {
  std::vector<std::string> out;
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [&](const std::string& t) { return !stopwords.contains(t); });
  return out;
}

std::string stem(std::string_view token) { return porter_stem(token); }

CleanTweet preprocess(const corpus::TweetRecord& record, const WordList& stopwords) {
  CleanTweet tweet{record.id, {}};
  for (const auto& token : remove_stopwords(tokenize(clean_text(record.original_text)), stopwords)) {
    std::string stemmed = stem(token);
    if (!stemmed.empty() && !stopwords.contains(stemmed)) tweet.tokens.push_back(std::move(stemmed));
  }
  return tweet;
}

std::vector<CleanTweet> preprocess_all(const std::vector<corpus::TweetRecord>& records,
                                       const WordList& stopwords) {
  std::vector<CleanTweet> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(preprocess(r, stopwords));
  return out;
}

void write_tokens_csv(std::ostream& out, const std::vector<CleanTweet>& tweets) {
  csv::write_row(out, {"tweet_id", "tokens"});
  for (const auto& t : tweets) {
    std::string joined;
    for (std::size_t i = 0; i < t.tokens.size(); ++i) {
      if (i > 0) joined.push_back(' ');
      joined += t.tokens[i];
    }
    csv::write_row(out, {std::to_string(t.tweet_id), joined});
  }
}

void write_tokens_csv(const std::filesystem::path& path, const std::vector<CleanTweet>& tweets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_tokens_csv(out, tweets);
}

std::vector<CleanTweet> read_tokens_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() < 2 || (*header)[0] != "tweet_id" || (*header)[1] != "tokens") {
    throw std::runtime_error("tokens csv: expected header 'tweet_id,tokens'");
  }
  std::vector<CleanTweet> tweets;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() < 2) {
      throw std::runtime_error("tokens csv: short row on line " + std::to_string(reader.line()));
    }
    CleanTweet t;
    const auto& id = (*row)[0];
    const auto [end, ec] = std::from_chars(id.data(), id.data() + id.size(), t.tweet_id);
    if (ec != std::errc{} || end != id.data() + id.size()) {
      throw std::runtime_error("tokens csv: bad tweet_id '" + id + "' on line " +
                               std::to_string(reader.line()));
    }
    t.tokens = tokenize((*row)[1]);
    tweets.push_back(std::move(t));
  }
  return tweets;
}

std::vector<CleanTweet> read_tokens_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_tokens_csv(in);
}

}  // namespace tweetsense::preprocess
