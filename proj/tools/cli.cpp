#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tweetsense/pipeline.hpp"

namespace tweetsense::cli {
namespace {

namespace fs = std::filesystem;
using pipeline::ConfigError;
using pipeline::PipelineConfig;

// Copies a parsed flag value over the config value when the flag was given.
template <typename T>
struct Override {
  T value{};
  CLI::Option* option = nullptr;
  void apply(T& target) const {
    if (option && option->count() > 0) target = value;
  }
};

template <typename T>
void bind_override(CLI::App* app, Override<T>& o, const std::string& name, const std::string& help) {
  o.option = app->add_option(name, o.value, help);
}

void require_input(std::vector<std::string>& diags, const std::string& flag, const fs::path& p) {
  if (!fs::is_regular_file(p)) diags.push_back(flag + ": file '" + p.string() + "' does not exist");
}

void require_optional_input(std::vector<std::string>& diags, const std::string& flag, const fs::path& p) {
  if (!p.empty()) require_input(diags, flag, p);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tweet corpus analytics and LSTM sentiment pipeline", "tweetsense"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "INI config file ([paths], [ngram], [sentiment], [embed], [train])");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load, keep English rows, dedupe by id, export CSV");
  std::string ingest_in, ingest_out;
  ingest->add_option("--in", ingest_in, "Raw tweet CSV")->required();
  ingest->add_option("--out", ingest_out, "Cleaned corpus CSV")->required();

  // preprocess
  auto* prep = app.add_subcommand("preprocess", "Clean, tokenize, drop stopwords and stem");
  std::string prep_in, prep_out;
  prep->add_option("--in", prep_in, "Corpus CSV")->required();
  prep->add_option("--out", prep_out, "tweet_id,tokens CSV")->required();
  Override<std::string> prep_stop;
  bind_override(prep, prep_stop, "--stopwords", "Stopword file (default: built-in list)");

  // ngram
  auto* ng = app.add_subcommand("ngram", "N-gram popularity report or keyword lexicon frequencies");
  std::string ng_in, ng_out, ng_mode = "ngram";
  int ng_n = 1;
  ng->add_option("--in", ng_in, "tweet_id,tokens CSV")->required();
  ng->add_option("--out", ng_out, "rank,ngram,count CSV")->required();
  ng->add_option("--n", ng_n, "N-gram order")->check(CLI::IsMember({1, 2, 3}));
  ng->add_option("--mode", ng_mode, "ngram or lexicon")->check(CLI::IsMember({"ngram", "lexicon"}));
  Override<int> ng_top;
  bind_override(ng, ng_top, "--top", "Report length");
  Override<std::string> ng_lex;
  bind_override(ng, ng_lex, "--lexicon", "Keyword lexicon for --mode lexicon");

  // sentiment
  auto* sent = app.add_subcommand("sentiment", "Valence scoring and three-way rating");
  std::string sent_in, sent_out, sent_dist;
  sent->add_option("--in", sent_in, "tweet_id,tokens CSV")->required();
  sent->add_option("--out", sent_out, "Scored CSV")->required();
  sent->add_option("--distribution", sent_dist, "Class distribution CSV");
  Override<std::string> sent_lex;
  bind_override(sent, sent_lex, "--lexicon", "Valence lexicon (default: built-in)");
  Override<double> sent_alpha;
  bind_override(sent, sent_alpha, "--alpha", "Compound normalization constant");

  // embed
  auto* emb = app.add_subcommand("embed", "Train skip-gram word vectors");
  std::string emb_in, emb_out;
  emb->add_option("--in", emb_in, "tweet_id,tokens CSV")->required();
  emb->add_option("--out", emb_out, "Embedding text file")->required();
  Override<int> emb_dim;
  bind_override(emb, emb_dim, "--dim", "Vector dimension");
  Override<int> emb_window;
  bind_override(emb, emb_window, "--window", "Context window");
  Override<int> emb_neg;
  bind_override(emb, emb_neg, "--negatives", "Negative samples per pair");
  Override<int> emb_epochs;
  bind_override(emb, emb_epochs, "--epochs", "Training epochs");
  Override<int> emb_min;
  bind_override(emb, emb_min, "--min-count", "Minimum token frequency");
  Override<double> emb_lr;
  bind_override(emb, emb_lr, "--lr", "Initial learning rate");
  Override<std::uint64_t> emb_seed;
  bind_override(emb, emb_seed, "--seed", "Random seed");

  // train
  auto* tr = app.add_subcommand("train", "Train the LSTM classifier on positive/negative tweets");
  std::string tr_tokens, tr_scored, tr_emb, tr_out, tr_log, tr_val;
  tr->add_option("--tokens", tr_tokens, "tweet_id,tokens CSV")->required();
  tr->add_option("--scored", tr_scored, "Scored CSV with labels")->required();
  tr->add_option("--embeddings", tr_emb, "Embedding text file")->required();
  tr->add_option("--out", tr_out, "Checkpoint path")->required();
  tr->add_option("--log", tr_log, "Epoch log CSV")->required();
  tr->add_option("--val-out", tr_val, "Held-out split as tweet_id,tokens,label CSV")->required();
  Override<int> tr_epochs;
  bind_override(tr, tr_epochs, "--epochs", "Training epochs");
  Override<int> tr_batch;
  bind_override(tr, tr_batch, "--batch", "Batch size");
  Override<double> tr_split;
  bind_override(tr, tr_split, "--split", "Training fraction");
  Override<std::uint64_t> tr_seed;
  bind_override(tr, tr_seed, "--seed", "Random seed");
  Override<int> tr_hidden;
  bind_override(tr, tr_hidden, "--hidden", "LSTM hidden size");
  Override<double> tr_lr;
  bind_override(tr, tr_lr, "--lr", "Adam learning rate");
  Override<int> tr_maxlen;
  bind_override(tr, tr_maxlen, "--max-len", "Padded sequence length");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Confusion matrix and classification report");
  std::string ev_model, ev_emb, ev_in, ev_out;
  ev->add_option("--model", ev_model, "Checkpoint path")->required();
  ev->add_option("--embeddings", ev_emb, "Embedding text file")->required();
  ev->add_option("--in", ev_in, "tweet_id,tokens,label CSV")->required();
  ev->add_option("--out", ev_out, "Report JSON")->required();

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "Run every stage in order");
  Override<std::string> pl_in;
  bind_override(pl, pl_in, "--in", "Raw tweet CSV (paths.input)");
  Override<std::string> pl_dir;
  bind_override(pl, pl_dir, "--out-dir", "Artifact directory (paths.output_dir)");
  Override<std::string> pl_stop;
  bind_override(pl, pl_stop, "--stopwords", "Stopword file");
  Override<std::string> pl_covid;
  bind_override(pl, pl_covid, "--covid-lexicon", "Keyword lexicon");
  Override<std::string> pl_val;
  bind_override(pl, pl_val, "--valence-lexicon", "Valence lexicon");
  Override<int> pl_top;
  bind_override(pl, pl_top, "--top", "N-gram report length");
  Override<std::uint64_t> pl_emb_seed;
  bind_override(pl, pl_emb_seed, "--embed-seed", "Embedding seed");
  Override<std::uint64_t> pl_tr_seed;
  bind_override(pl, pl_tr_seed, "--train-seed", "Training seed");
  Override<int> pl_epochs;
  bind_override(pl, pl_epochs, "--epochs", "LSTM training epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = pipeline::load_config(config_path, cfg);

    auto as_path = [](const std::string& s) { return fs::path(s); };
    std::vector<std::string> diags;
    std::string summary;

    if (*ingest) {
      require_input(diags, "--in", ingest_in);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::ingest(ingest_in, ingest_out);
    } else if (*prep) {
      std::string stop = cfg.paths.stopwords.string();
      prep_stop.apply(stop);
      require_input(diags, "--in", prep_in);
      require_optional_input(diags, "--stopwords", stop);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::preprocess(prep_in, stop, prep_out);
    } else if (*ng) {
      ng_top.apply(cfg.ngram.top);
      std::string lex = cfg.paths.covid_lexicon.string();
      ng_lex.apply(lex);
      diags = pipeline::validate_options(cfg);
      require_input(diags, "--in", ng_in);
      require_optional_input(diags, "--lexicon", lex);
      if (!diags.empty()) throw ConfigError(diags);
      summary = ng_mode == "lexicon" ? pipeline::lexicon_frequency(ng_in, lex, ng_out)
                                     : pipeline::ngram(ng_in, ng_n, cfg.ngram.top, ng_out);
    } else if (*sent) {
      sent_alpha.apply(cfg.sentiment.alpha);
      std::string lex = cfg.paths.valence_lexicon.string();
      sent_lex.apply(lex);
      diags = pipeline::validate_options(cfg);
      require_input(diags, "--in", sent_in);
      require_optional_input(diags, "--lexicon", lex);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::sentiment(sent_in, lex, cfg.sentiment.alpha, sent_out, as_path(sent_dist));
    } else if (*emb) {
      emb_dim.apply(cfg.embed.dim);
      emb_window.apply(cfg.embed.window);
      emb_neg.apply(cfg.embed.negatives);
      emb_epochs.apply(cfg.embed.epochs);
      emb_min.apply(cfg.embed.min_count);
      emb_lr.apply(cfg.embed.learning_rate);
      emb_seed.apply(cfg.embed.seed);
      diags = pipeline::validate_options(cfg);
      require_input(diags, "--in", emb_in);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::embed(emb_in, cfg.embed, emb_out);
    } else if (*tr) {
      tr_epochs.apply(cfg.train.epochs);
      tr_batch.apply(cfg.train.batch_size);
      tr_split.apply(cfg.train.split);
      tr_seed.apply(cfg.train.seed);
      tr_hidden.apply(cfg.train.hidden);
      tr_lr.apply(cfg.train.learning_rate);
      tr_maxlen.apply(cfg.embed.max_len);
      diags = pipeline::validate_options(cfg);
      require_input(diags, "--tokens", tr_tokens);
      require_input(diags, "--scored", tr_scored);
      require_input(diags, "--embeddings", tr_emb);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::train(tr_tokens, tr_scored, tr_emb, cfg.embed, cfg.train,
                                {tr_out, tr_log, tr_val});
    } else if (*ev) {
      require_input(diags, "--model", ev_model);
      require_input(diags, "--embeddings", ev_emb);
      require_input(diags, "--in", ev_in);
      if (!diags.empty()) throw ConfigError(diags);
      summary = pipeline::evaluate(ev_model, ev_emb, ev_in, ev_out);
    } else if (*pl) {
      if (pl_in.option->count()) cfg.paths.input = pl_in.value;
      if (pl_dir.option->count()) cfg.paths.output_dir = pl_dir.value;
      if (pl_stop.option->count()) cfg.paths.stopwords = pl_stop.value;
      if (pl_covid.option->count()) cfg.paths.covid_lexicon = pl_covid.value;
      if (pl_val.option->count()) cfg.paths.valence_lexicon = pl_val.value;
      pl_top.apply(cfg.ngram.top);
      pl_emb_seed.apply(cfg.embed.seed);
      pl_tr_seed.apply(cfg.train.seed);
      pl_epochs.apply(cfg.train.epochs);
      pipeline::validate(cfg);
      for (const auto& line : pipeline::run_pipeline(cfg)) {
        if (!summary.empty()) summary += "\n";
        summary += line;
      }
    }
    out << summary << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    for (const auto& d : e.diagnostics()) err << "config error: " << d << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace tweetsense::cli
