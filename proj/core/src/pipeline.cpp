#include "tweetsense/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tweetsense/corpus.hpp"
#include "tweetsense/csv.hpp"
#include "tweetsense/default_resources.hpp"
#include "tweetsense/embedding.hpp"
#include "tweetsense/lstm.hpp"
#include "tweetsense/metrics.hpp"
#include "tweetsense/ngram.hpp"
#include "tweetsense/preprocess.hpp"
#include "tweetsense/sentiment.hpp"

namespace tweetsense::pipeline {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "\n";
    out += l;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && end == text.data() + text.size();
}

using Setter = std::function<bool(PipelineConfig&, const std::string&, const fs::path&)>;

template <auto Section, auto Field>
Setter numeric() {
  return [](PipelineConfig& c, const std::string& v, const fs::path&) {
    return parse_number(v, (c.*Section).*Field);
  };
}

template <auto Field>
Setter path_field() {
  return [](PipelineConfig& c, const std::string& v, const fs::path& base) {
    fs::path p(v);
    c.paths.*Field = (v.empty() || p.is_absolute()) ? p : base / p;
    return true;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"paths.input", path_field<&PathOptions::input>()},
      {"paths.stopwords", path_field<&PathOptions::stopwords>()},
      {"paths.covid_lexicon", path_field<&PathOptions::covid_lexicon>()},
      {"paths.valence_lexicon", path_field<&PathOptions::valence_lexicon>()},
      {"paths.output_dir", path_field<&PathOptions::output_dir>()},
      {"ngram.top", numeric<&PipelineConfig::ngram, &NgramOptions::top>()},
      {"sentiment.alpha", numeric<&PipelineConfig::sentiment, &SentimentOptions::alpha>()},
      {"embed.dim", numeric<&PipelineConfig::embed, &EmbedOptions::dim>()},
      {"embed.window", numeric<&PipelineConfig::embed, &EmbedOptions::window>()},
      {"embed.negatives", numeric<&PipelineConfig::embed, &EmbedOptions::negatives>()},
      {"embed.epochs", numeric<&PipelineConfig::embed, &EmbedOptions::epochs>()},
      {"embed.min_count", numeric<&PipelineConfig::embed, &EmbedOptions::min_count>()},
      {"embed.max_len", numeric<&PipelineConfig::embed, &EmbedOptions::max_len>()},
      {"embed.learning_rate", numeric<&PipelineConfig::embed, &EmbedOptions::learning_rate>()},
      {"embed.seed", numeric<&PipelineConfig::embed, &EmbedOptions::seed>()},
      {"train.epochs", numeric<&PipelineConfig::train, &TrainOptions::epochs>()},
      {"train.batch_size", numeric<&PipelineConfig::train, &TrainOptions::batch_size>()},
      {"train.split", numeric<&PipelineConfig::train, &TrainOptions::split>()},
      {"train.seed", numeric<&PipelineConfig::train, &TrainOptions::seed>()},
      {"train.hidden", numeric<&PipelineConfig::train, &TrainOptions::hidden>()},
      {"train.learning_rate", numeric<&PipelineConfig::train, &TrainOptions::learning_rate>()},
  };
  return table;
}

preprocess::WordList stopword_list(const fs::path& path) {
  return path.empty() ? preprocess::WordList::default_stopwords() : preprocess::WordList::load(path);
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v);
  return buf;
}

struct LabeledTweet {
  corpus::TweetId tweet_id = 0;
  std::vector<std::string> tokens;
  sentiment::Label label = sentiment::Label::negative();
};

void write_labeled_csv(const fs::path& path, const std::vector<LabeledTweet>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  csv::write_row(out, {"tweet_id", "tokens", "label"});
  for (const auto& r : rows) {
    csv::write_row(out, {std::to_string(r.tweet_id), ngram::join(r.tokens), r.label.to_string()});
  }
}

std::vector<LabeledTweet> read_labeled_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() != 3 || (*header)[0] != "tweet_id" || (*header)[1] != "tokens" ||
      (*header)[2] != "label") {
    throw std::runtime_error(path.string() + ": expected header 'tweet_id,tokens,label'");
  }
  std::vector<LabeledTweet> rows;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 3) {
      throw std::runtime_error(path.string() + ": bad row on line " + std::to_string(reader.line()));
    }
    LabeledTweet t;
    double label = 0.0;
    if (!parse_number((*row)[0], t.tweet_id) || !parse_number((*row)[2], label)) {
      throw std::runtime_error(path.string() + ": bad number on line " + std::to_string(reader.line()));
    }
    t.tokens = preprocess::tokenize((*row)[1]);
    t.label = sentiment::Label::from_value(label);
    rows.push_back(std::move(t));
  }
  return rows;
}

lstm::Sample to_sample(const LabeledTweet& t, const embedding::LoadedEmbeddings& emb, int max_len) {
  auto seq = embedding::embed_sequence(t.tokens, emb.vocab, emb.matrix, max_len);
  return {std::move(seq.values), seq.valid_length, t.label};
}

void require_file(std::vector<std::string>& diags, const std::string& field, const fs::path& p,
                  bool optional) {
  if (p.empty()) {
    if (!optional) diags.push_back(field + ": required");
    return;
  }
  if (!fs::is_regular_file(p)) diags.push_back(field + ": file '" + p.string() + "' does not exist");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

PipelineConfig load_config(const fs::path& path, PipelineConfig base) {
  if (!fs::is_regular_file(path)) {
    throw ConfigError({"config: file '" + path.string() + "' does not exist"});
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError({"config: " + std::string(e.what())});
  }
  const fs::path dir = path.parent_path();
  std::vector<std::string> diags;
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      diags.push_back(section + ": key outside of a section");
      continue;
    }
    for (const auto& [key, node] : keys) {
      const std::string field = section + "." + key;
      const auto it = setters().find(field);
      if (it == setters().end()) {
        diags.push_back(field + ": unknown key");
        continue;
      }
      if (!it->second(base, node.data(), dir)) {
        diags.push_back(field + ": cannot parse '" + node.data() + "'");
      }
    }
  }
  if (!diags.empty()) throw ConfigError(std::move(diags));
  return base;
}

std::vector<std::string> validate_options(const PipelineConfig& c) {
  std::vector<std::string> d;
  if (c.ngram.top < 0) d.push_back("ngram.top: must be >= 0");
  if (!(c.sentiment.alpha > 0)) d.push_back("sentiment.alpha: must be > 0");
  if (c.embed.dim < 1) d.push_back("embed.dim: must be >= 1");
  if (c.embed.window < 1) d.push_back("embed.window: must be >= 1");
  if (c.embed.negatives < 0) d.push_back("embed.negatives: must be >= 0");
  if (c.embed.epochs < 1) d.push_back("embed.epochs: must be >= 1");
  if (c.embed.min_count < 1) d.push_back("embed.min_count: must be >= 1");
  if (c.embed.max_len < 1) d.push_back("embed.max_len: must be >= 1");
  if (!(c.embed.learning_rate > 0)) d.push_back("embed.learning_rate: must be > 0");
  if (c.train.epochs < 1) d.push_back("train.epochs: must be >= 1");
  if (c.train.batch_size < 1) d.push_back("train.batch_size: must be >= 1");
  if (!(c.train.split > 0 && c.train.split < 1)) d.push_back("train.split: must be in (0, 1)");
  if (c.train.hidden < 1) d.push_back("train.hidden: must be >= 1");
  if (!(c.train.learning_rate > 0)) d.push_back("train.learning_rate: must be > 0");
  return d;
}

void validate(const PipelineConfig& c) {
  auto d = validate_options(c);
  require_file(d, "paths.input", c.paths.input, false);
  require_file(d, "paths.stopwords", c.paths.stopwords, true);
  require_file(d, "paths.covid_lexicon", c.paths.covid_lexicon, true);
  require_file(d, "paths.valence_lexicon", c.paths.valence_lexicon, true);
  if (c.paths.output_dir.empty()) d.push_back("paths.output_dir: required");
  if (!d.empty()) throw ConfigError(std::move(d));
}

std::string ingest(const fs::path& in, const fs::path& out) {
  auto loaded = corpus::load_csv(in);
  const auto english = corpus::filter_english(loaded.records);
  const auto unique = corpus::dedupe(english);
  corpus::write_csv(out, unique);
  std::ostringstream s;
  s << "ingest: " << loaded.records.size() << " rows loaded, " << loaded.skipped.size()
    << " skipped, " << english.size() << " english, " << unique.size() << " unique -> " << out.string();
  for (const auto& skip : loaded.skipped) {
    s << "\n  skipped line " << skip.line << ": " << skip.reason;
  }
  return s.str();
}

std::string preprocess(const fs::path& in, const fs::path& stopwords, const fs::path& out) {
  auto loaded = corpus::load_csv(in);
  const auto words = stopword_list(stopwords);
  const auto tweets = preprocess::preprocess_all(loaded.records, words);
  preprocess::write_tokens_csv(out, tweets);
  std::size_t tokens = 0;
  for (const auto& t : tweets) tokens += t.tokens.size();
  std::ostringstream s;
  s << "preprocess: " << tweets.size() << " tweets, " << tokens << " tokens -> " << out.string();
  return s.str();
}

std::string ngram(const fs::path& tokens, int n, int top, const fs::path& out) {
  const auto tweets = preprocess::read_tokens_csv(tokens);
  const auto counts = ngram::count_ngrams(tweets, n);
  const auto report = ngram::top_k(counts, static_cast<std::size_t>(std::max(top, 0)));
  ngram::write_report_csv(out, report);
  std::ostringstream s;
  s << "ngram: n=" << n << ", " << counts.counts.size() << " distinct, top " << report.entries.size()
    << " -> " << out.string();
  return s.str();
}

std::string lexicon_frequency(const fs::path& tokens, const fs::path& lexicon, const fs::path& out) {
  const auto tweets = preprocess::read_tokens_csv(tokens);
  const auto words = lexicon.empty() ? preprocess::WordList::parse(resources::default_covid_lexicon())
                                     : preprocess::WordList::load(lexicon);
  // Tokens are stemmed, so the lexicon is matched through its stems and
  // reported under the original words.
  std::map<std::string, std::string> label_for_stem;
  std::vector<std::string> stems;
  for (const auto& w : words.sorted()) {
    const std::string stem = preprocess::stem(w);
    auto [it, inserted] = label_for_stem.emplace(stem, w);
    if (inserted) stems.push_back(stem);
    else it->second += "/" + w;
  }
  auto report = ngram::lexicon_frequency(tweets, preprocess::WordList(stems));
  for (auto& e : report.entries) e.ngram = {label_for_stem.at(e.ngram.front())};
  ngram::write_report_csv(out, report);
  std::ostringstream s;
  s << "lexicon: " << report.entries.size() << " keywords";
  if (!report.entries.empty()) {
    s << ", most frequent '" << report.entries.front().ngram.front() << "' ("
      << report.entries.front().count << ")";
  }
  s << " -> " << out.string();
  return s.str();
}

std::string sentiment(const fs::path& tokens, const fs::path& lexicon, double alpha,
                      const fs::path& out, const fs::path& distribution_out) {
  const auto tweets = preprocess::read_tokens_csv(tokens);
  const auto lex = (lexicon.empty() ? sentiment::ValenceLexicon::default_lexicon()
                                    : sentiment::ValenceLexicon::load(lexicon))
                       .stemmed();
  std::vector<sentiment::ScoredTweet> rows;
  std::vector<sentiment::Label> labels;
  for (const auto& t : tweets) {
    const auto scores = sentiment::score(t, lex, alpha);
    rows.push_back({t.tweet_id, scores, sentiment::classify(scores.compound)});
    labels.push_back(rows.back().label);
  }
  sentiment::write_scored_csv(out, rows);
  const auto dist = sentiment::class_distribution(labels);
  if (!distribution_out.empty()) sentiment::write_distribution_csv(distribution_out, dist);
  std::ostringstream s;
  s << "sentiment: " << rows.size() << " tweets, positive " << percent(dist.positive) << ", negative "
    << percent(dist.negative) << ", neutral " << percent(dist.neutral) << " -> " << out.string();
  return s.str();
}

std::string embed(const fs::path& tokens, const EmbedOptions& o, const fs::path& out) {
  const auto tweets = preprocess::read_tokens_csv(tokens);
  const auto vocab = embedding::build_vocab(tweets, o.min_count);
  embedding::SkipGramConfig config;
  config.dim = o.dim;
  config.window = o.window;
  config.negatives = o.negatives;
  config.epochs = o.epochs;
  config.learning_rate = o.learning_rate;
  config.seed = o.seed;
  const auto result = embedding::train_skipgram(tweets, vocab, config);
  embedding::save_text(out, vocab, result.embeddings);
  std::ostringstream s;
  s << "embed: " << vocab.size() << " words x " << o.dim << " dims, final loss "
    << format_double(result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back()) << " -> " << out.string();
  return s.str();
}

std::string train(const fs::path& tokens, const fs::path& scored, const fs::path& embeddings,
                  const EmbedOptions& embed_options, const TrainOptions& o, const TrainArtifacts& out) {
  const auto tweets = preprocess::read_tokens_csv(tokens);
  const auto scores = sentiment::read_scored_csv(scored);
  std::unordered_map<corpus::TweetId, sentiment::Label> label_of;
  for (const auto& s : scores) label_of.emplace(s.tweet_id, s.label);

  // Neutral tweets are excluded from the two-class model.
  std::vector<LabeledTweet> labeled;
  for (const auto& t : tweets) {
    const auto it = label_of.find(t.tweet_id);
    if (it == label_of.end() || it->second.is_neutral()) continue;
    labeled.push_back({t.tweet_id, t.tokens, it->second});
  }

  const auto emb = embedding::load_text(embeddings);
  std::vector<lstm::Sample> samples;
  samples.reserve(labeled.size());
  for (const auto& t : labeled) samples.push_back(to_sample(t, emb, embed_options.max_len));

  lstm::ModelConfig model_config;
  model_config.input_dim = emb.matrix.dim();
  model_config.hidden_size = o.hidden;
  model_config.max_len = embed_options.max_len;
  lstm::TrainConfig config;
  config.epochs = o.epochs;
  config.batch_size = o.batch_size;
  config.train_fraction = o.split;
  config.seed = o.seed;
  config.adam.learning_rate = o.learning_rate;

  const auto result = lstm::train(samples, model_config, config);
  lstm::save_checkpoint(out.checkpoint, result.model);
  lstm::write_epoch_log_csv(out.epoch_log, result.log);
  std::vector<LabeledTweet> held_out;
  for (std::size_t i : result.val_indices) held_out.push_back(labeled[i]);
  write_labeled_csv(out.validation, held_out);

  std::ostringstream s;
  s << "train: " << result.train_indices.size() << " train / " << result.val_indices.size()
    << " validation samples, " << lstm::count_parameters(result.model.params) << " parameters";
  if (!result.log.empty()) {
    const auto& last = result.log.back();
    s << ", epoch " << last.epoch << " train acc " << percent(last.train_accuracy) << " val acc "
      << percent(last.val_accuracy);
  }
  s << " -> " << out.checkpoint.string();
  for (const auto& w : result.warnings) s << "\n  warning: " << w;
  return s.str();
}

std::string evaluate(const fs::path& checkpoint, const fs::path& embeddings, const fs::path& labeled,
                     const fs::path& out) {
  const auto model = lstm::load_checkpoint(checkpoint);
  const auto emb = embedding::load_text(embeddings);
  if (emb.matrix.dim() != model.config.input_dim) {
    throw std::runtime_error("evaluate: embedding dim " + std::to_string(emb.matrix.dim()) +
                             " does not match model input dim " + std::to_string(model.config.input_dim));
  }
  std::vector<std::pair<sentiment::Label, sentiment::Label>> pairs;
  for (const auto& t : read_labeled_csv(labeled)) {
    const auto sample = to_sample(t, emb, model.config.max_len);
    pairs.emplace_back(t.label, lstm::predict(model, sample.sequence, sample.valid_length));
  }
  const auto cm = metrics::confusion(pairs);
  const auto rep = metrics::report(cm);
  metrics::write_report_json(out, cm, rep);
  std::ostringstream s;
  s << "evaluate: " << cm.total() << " samples";
  if (cm.total() > 0) s << ", accuracy " << percent(100.0 * metrics::accuracy(cm));
  s << " -> " << out.string();
  return s.str();
}

std::vector<std::string> run_pipeline(const PipelineConfig& config) {
  validate(config);
  const fs::path& dir = config.paths.output_dir;
  fs::create_directories(dir);
  auto at = [&](const char* name) { return dir / name; };

  std::vector<std::string> log;
  log.push_back(ingest(config.paths.input, at(artifacts::kCorpus)));
  log.push_back(preprocess(at(artifacts::kCorpus), config.paths.stopwords, at(artifacts::kTokens)));
  log.push_back(ngram(at(artifacts::kTokens), 1, config.ngram.top, at(artifacts::kUnigrams)));
  log.push_back(ngram(at(artifacts::kTokens), 2, config.ngram.top, at(artifacts::kBigrams)));
  log.push_back(ngram(at(artifacts::kTokens), 3, config.ngram.top, at(artifacts::kTrigrams)));
  log.push_back(lexicon_frequency(at(artifacts::kTokens), config.paths.covid_lexicon,
                                  at(artifacts::kLexiconFrequency)));
  log.push_back(sentiment(at(artifacts::kTokens), config.paths.valence_lexicon, config.sentiment.alpha,
                          at(artifacts::kScored), at(artifacts::kDistribution)));
  log.push_back(embed(at(artifacts::kTokens), config.embed, at(artifacts::kEmbeddings)));
  log.push_back(train(at(artifacts::kTokens), at(artifacts::kScored), at(artifacts::kEmbeddings),
                      config.embed, config.train,
                      {at(artifacts::kCheckpoint), at(artifacts::kEpochLog), at(artifacts::kValidation)}));
  log.push_back(evaluate(at(artifacts::kCheckpoint), at(artifacts::kEmbeddings), at(artifacts::kValidation),
                         at(artifacts::kReport)));
  return log;
}

}  // namespace tweetsense::pipeline
