#include "tweetsense/sentiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tweetsense/csv.hpp"
#include "tweetsense/default_resources.hpp"
#include "tweetsense/porter_stemmer.hpp"

namespace tweetsense::sentiment {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

double parse_double(const std::string& text, const char* what) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
    throw std::runtime_error(std::string(what) + ": bad number '" + text + "'");
  }
  return value;
}

// Shortest decimal form that round-trips.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

Label Label::from_value(double value) {
  if (value == 0.0) return negative();
  if (value == 0.5) return neutral();
  if (value == 1.0) return positive();
  throw std::invalid_argument("label must be 0.0, 0.5 or 1.0");
}

std::string Label::to_string() const {
  if (value_ == 0.0) return "0.0";
  if (value_ == 0.5) return "0.5";
  return "1.0";
}

ValenceLexicon ValenceLexicon::parse(std::string_view text) {
  ValenceLexicon lexicon;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("valence lexicon line " + std::to_string(line_no) +
                               ": expected token<TAB>valence");
    }
    const auto next_tab = line.find('\t', tab + 1);
    const std::string value = line.substr(tab + 1, next_tab == std::string::npos
                                                       ? std::string::npos
                                                       : next_tab - tab - 1);
    lexicon.set(line.substr(0, tab), parse_double(value, "valence lexicon"));
  }
  return lexicon;
}

ValenceLexicon ValenceLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open valence lexicon '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

ValenceLexicon ValenceLexicon::default_lexicon() {
  return parse(resources::default_valence_lexicon());
}

void ValenceLexicon::set(std::string_view token, double valence) {
  if (!std::isfinite(valence)) throw std::invalid_argument("valence must be finite");
  entries_[lowercase(token)] = valence;
}

const double* ValenceLexicon::find(std::string_view token) const {
  const auto it = entries_.find(std::string(token));
  return it == entries_.end() ? nullptr : &it->second;
}

ValenceLexicon ValenceLexicon::stemmed() const {
  // Ordered so the mean is accumulated in a fixed order.
  std::map<std::string, std::pair<double, int>> sums;
  const std::map<std::string, double> ordered(entries_.begin(), entries_.end());
  for (const auto& [token, valence] : ordered) {
    auto& [sum, n] = sums[porter_stem(token)];
    sum += valence;
    ++n;
  }
  ValenceLexicon out;
  for (const auto& [stem, acc] : sums) out.entries_[stem] = acc.first / acc.second;
  return out;
}

ValenceLexicon ValenceLexicon::scaled(double factor) const {
  ValenceLexicon out;
  for (const auto& [token, valence] : entries_) out.set(token, valence * factor);
  return out;
}

SentimentScores score(const preprocess::CleanTweet& tweet, const ValenceLexicon& lexicon,
                      double alpha) {
  SentimentScores s;
  if (tweet.tokens.empty()) return s;

  double sum = 0.0;
  double magnitude = 0.0;
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const auto& token : tweet.tokens) {
    const double* v = lexicon.find(token);
    if (!v) continue;
    sum += *v;
    magnitude += std::abs(*v);
    if (*v > 0) ++pos;
    if (*v < 0) ++neg;
  }
  const auto n = static_cast<double>(tweet.tokens.size());
  s.pos = static_cast<double>(pos) / n;
  s.neg = static_cast<double>(neg) / n;
  s.neu = static_cast<double>(tweet.tokens.size() - pos - neg) / n;
  // Valences that cancel exactly in real arithmetic can leave a few ulps of
  // rounding behind (0.1 + 0.2 - 0.3); that residue must not pick a side.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  if (std::abs(sum) <= slack) sum = 0.0;
  s.compound = sum / std::sqrt(sum * sum + alpha);
  return s;
}

Label classify(double compound) {
  if (compound < 0) return Label::negative();
  if (compound > 0) return Label::positive();
  return Label::neutral();
}

ClassDistribution class_distribution(const std::vector<Label>& labels) {
  ClassDistribution d;
  d.count = labels.size();
  for (Label l : labels) {
    if (l == Label::positive()) ++d.positive_count;
    else if (l == Label::negative()) ++d.negative_count;
    else ++d.neutral_count;
  }
  if (d.count == 0) return d;
  const auto total = static_cast<double>(d.count);
  d.positive = 100.0 * static_cast<double>(d.positive_count) / total;
  d.negative = 100.0 * static_cast<double>(d.negative_count) / total;
  d.neutral = 100.0 * static_cast<double>(d.neutral_count) / total;
  return d;
}

void write_scored_csv(std::ostream& out, const std::vector<ScoredTweet>& rows) {
  csv::write_row(out, {"tweet_id", "pos", "neg", "neu", "compound", "label"});
  for (const auto& r : rows) {
    csv::write_row(out, {std::to_string(r.tweet_id), format_double(r.scores.pos),
                         format_double(r.scores.neg), format_double(r.scores.neu),
                         format_double(r.scores.compound), r.label.to_string()});
  }
}

void write_scored_csv(const std::filesystem::path& path, const std::vector<ScoredTweet>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_scored_csv(out, rows);
}

std::vector<ScoredTweet> read_scored_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() != 6 || (*header)[0] != "tweet_id") {
    throw std::runtime_error("scored csv: unexpected header");
  }
  std::vector<ScoredTweet> rows;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 6) {
      throw std::runtime_error("scored csv: bad row on line " + std::to_string(reader.line()));
    }
    ScoredTweet r;
    const auto& id = (*row)[0];
    const auto [end, ec] = std::from_chars(id.data(), id.data() + id.size(), r.tweet_id);
    if (ec != std::errc{} || end != id.data() + id.size()) {
      throw std::runtime_error("scored csv: bad tweet_id '" + id + "'");
    }
    r.scores.pos = parse_double((*row)[1], "scored csv");
    r.scores.neg = parse_double((*row)[2], "scored csv");
    r.scores.neu = parse_double((*row)[3], "scored csv");
    r.scores.compound = parse_double((*row)[4], "scored csv");
    r.label = Label::from_value(parse_double((*row)[5], "scored csv"));
    rows.push_back(r);
  }
  return rows;
}

void write_distribution_csv(const std::filesystem::path& path, const ClassDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  csv::write_row(out, {"class", "count", "percent"});
  csv::write_row(out, {"positive", std::to_string(dist.positive_count), format_double(dist.positive)});
  csv::write_row(out, {"negative", std::to_string(dist.negative_count), format_double(dist.negative)});
  csv::write_row(out, {"neutral", std::to_string(dist.neutral_count), format_double(dist.neutral)});
}

}  // namespace tweetsense::sentiment
