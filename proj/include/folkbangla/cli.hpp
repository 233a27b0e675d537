#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data or
// processing error. Diagnostics go to `err`, data to `out` or --out files.

#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "folkbangla/corpus.hpp"
#include "folkbangla/embeddings.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/evaluation.hpp"
#include "folkbangla/pipeline.hpp"
#include "folkbangla/propp.hpp"
#include "folkbangla/subword.hpp"
#include "folkbangla/summarizer.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/version.hpp"

namespace folkbangla::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  std::string raw;
  if (path.empty() || path == "-") {
    raw.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    raw = read_file(path);
  }
  if (auto bad = utf8::find_invalid(raw)) {
    throw DecodeError("invalid UTF-8 in " + (path.empty() ? std::string("<stdin>") : path), *bad);
  }
  return raw;
}

inline Document input_document(const std::string& path, std::istream& in) {
  const std::string id = path.empty() || path == "-" ? "stdin" : std::filesystem::path(path).stem().string();
  return make_document(id, read_input(path, in), path);
}

inline void write_or_print(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_file(out_path, content);
  }
}

inline std::vector<std::filesystem::path> as_paths(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                    std::istream& in = std::cin) {
  CLI::App app{"Bengali folklore toolkit: tokenization, subword and embedding training, Propp character roles, "
               "frequency summarization and evaluation",
               "folkbangla"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  const auto data_dir = default_data_dir();

  // tokenize
  std::string tok_mode = "basic";
  std::string tok_input;
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Tokenize or sentence-split text (TSV: surface, start, end, kind)");
  tokenize_cmd->add_option("--mode", tok_mode, "basic | punct | sentences")
      ->check(CLI::IsMember({"basic", "punct", "sentences"}))
      ->capture_default_str();
  tokenize_cmd->add_option("input", tok_input, "UTF-8 file (default: standard input)");

  // train-subword
  std::size_t vocab_size = 500;
  std::string subword_out;
  std::vector<std::string> subword_inputs;
  auto* train_subword_cmd = app.add_subcommand("train-subword", "Train a BPE subword model");
  train_subword_cmd->add_option("--vocab-size", vocab_size, "Maximum number of pieces")->capture_default_str();
  train_subword_cmd->add_option("--out", subword_out, "Model file (default: standard output)");
  train_subword_cmd->add_option("inputs", subword_inputs, "Corpus files")->required();

  // encode
  std::string encode_model;
  std::string encode_input;
  auto* encode_cmd = app.add_subcommand("encode", "Encode text into subword pieces (TSV: id, piece, start, end)");
  encode_cmd->add_option("--model", encode_model, "BPE model file")->required();
  encode_cmd->add_option("input", encode_input, "UTF-8 file (default: standard input)");

  // train-embed
  std::string embed_mode = "word2vec";
  TrainConfig embed;
  std::string embed_out;
  std::string embed_loss_out;
  std::vector<std::string> embed_inputs;
  auto* train_embed_cmd = app.add_subcommand("train-embed", "Train skip-gram (word2vec) or subword (fasttext) vectors");
  train_embed_cmd->add_option("--mode", embed_mode, "word2vec | fasttext")
      ->check(CLI::IsMember({"word2vec", "fasttext"}))
      ->capture_default_str();
  train_embed_cmd->add_option("--dim", embed.dim, "Embedding dimension")->capture_default_str();
  train_embed_cmd->add_option("--window", embed.window, "Maximum context window")->capture_default_str();
  train_embed_cmd->add_option("--min-count", embed.min_count, "Minimum word frequency")->capture_default_str();
  auto* epochs_opt = train_embed_cmd->add_option("--epochs", embed.epochs, "Passes over the corpus (default 20, fasttext 100)");
  train_embed_cmd->add_option("--steps", embed.steps, "Stop after this many SGD updates (0 = off)")->capture_default_str();
  train_embed_cmd->add_option("--negatives", embed.negatives, "Negative samples per pair")->capture_default_str();
  train_embed_cmd->add_option("--lr", embed.initial_lr, "Initial learning rate")->capture_default_str();
  train_embed_cmd->add_option("--seed", embed.seed, "Random seed")->capture_default_str();
  train_embed_cmd->add_option("--threads", embed.threads, "Worker threads (1 = deterministic)")->capture_default_str();
  train_embed_cmd->add_option("--buckets", embed.buckets, "Hash buckets for n-grams (fasttext)")->capture_default_str();
  train_embed_cmd->add_option("--out", embed_out, "Vector file in word2vec text format (default: standard output)");
  train_embed_cmd->add_option("--loss-out", embed_loss_out, "Write per-epoch mean loss as TSV");
  train_embed_cmd->add_option("inputs", embed_inputs, "Corpus files")->required();

  // nn
  std::string nn_model;
  std::string nn_word;
  std::size_t nn_k = 10;
  auto* nn_cmd = app.add_subcommand("nn", "Nearest neighbours by cosine similarity (TSV: word, cosine)");
  nn_cmd->add_option("--model", nn_model, "Vector file in word2vec text format")->required();
  nn_cmd->add_option("--word", nn_word, "Query word")->required();
  nn_cmd->add_option("--k", nn_k, "Number of neighbours")->capture_default_str()->check(CLI::PositiveNumber);

  // characters
  std::string lexicon_path = (data_dir / "lexicon.tsv").string();
  std::string matrix_path = (data_dir / "role_matrix.tsv").string();
  std::string triggers_path = (data_dir / "triggers.tsv").string();
  std::string stopwords_path = (data_dir / "stopwords_bn.txt").string();
  propp::ScoreWeights weights;
  bool no_proper_names = false;
  std::string pred_out;
  std::string char_input;
  auto* characters_cmd =
      app.add_subcommand("characters", "Identify folk characters and their Propp roles (TSV: canonical, role, score, mentions)");
  characters_cmd->add_option("--lexicon", lexicon_path, "Character lexicon TSV")->capture_default_str();
  characters_cmd->add_option("--matrix", matrix_path, "Role matrix TSV")->capture_default_str();
  characters_cmd->add_option("--triggers", triggers_path, "Function trigger TSV")->capture_default_str();
  characters_cmd->add_option("--stopwords", stopwords_path, "Stopword list")->capture_default_str();
  characters_cmd->add_option("--b", weights.b, "Weight of lexical evidence")->capture_default_str();
  characters_cmd->add_option("--c", weights.c, "Weight of contextual evidence")->capture_default_str();
  characters_cmd->add_flag("--no-proper-names", no_proper_names, "Only detect lexicon mentions");
  characters_cmd->add_option("--pred-out", pred_out, "Also write predictions in evaluation TSV format");
  characters_cmd->add_option("input", char_input, "UTF-8 file (default: standard input)");

  // summarize
  std::size_t summary_k = 0;
  double summary_ratio = 0.3;
  bool summary_scores = false;
  std::string summary_input;
  std::string summary_stopwords = (data_dir / "stopwords_bn.txt").string();
  auto* summarize_cmd = app.add_subcommand("summarize", "Extractive word-frequency summary");
  summarize_cmd->add_option("--stopwords", summary_stopwords, "Stopword list")->capture_default_str();
  auto* k_opt = summarize_cmd->add_option("--k", summary_k, "Number of sentences")->check(CLI::PositiveNumber);
  auto* ratio_opt = summarize_cmd->add_option("--ratio", summary_ratio, "Fraction of sentences, rounded up")
                        ->capture_default_str()
                        ->check(CLI::Range(0.0, 1.0));
  k_opt->excludes(ratio_opt);
  summarize_cmd->add_flag("--scores", summary_scores, "Print TSV of sentence_index, score, sentence instead");
  summarize_cmd->add_option("input", summary_input, "UTF-8 file (default: standard input)");

  // eval
  std::string gold_path;
  std::vector<std::string> pred_paths;
  std::vector<std::string> model_names;
  bool entity_only = false;
  bool eval_tsv = false;
  auto* eval_cmd = app.add_subcommand("eval", "Precision / recall / F1 of role predictions");
  eval_cmd->add_option("--gold", gold_path, "Gold TSV (document, canonical, role)")->required();
  eval_cmd->add_option("--pred", pred_paths, "Prediction TSV; repeat to compare systems")->required();
  eval_cmd->add_option("--name", model_names, "Model name per --pred (default: file stem)");
  eval_cmd->add_flag("--entity-only", entity_only, "Match on character only, ignoring role");
  eval_cmd->add_flag("--tsv", eval_tsv, "Print machine-readable TSV instead of the table");

  // stats
  std::vector<std::string> stats_inputs;
  auto* stats_cmd = app.add_subcommand("stats", "Word counts per document and in total");
  stats_cmd->add_option("inputs", stats_inputs, "Corpus files")->required();

  // pipeline
  PipelineConfig pipeline = PipelineConfig::with_bundled_data();
  std::vector<std::string> pipeline_inputs;
  std::string pipeline_out = pipeline.out_dir.string();
  std::string pipeline_mode = "word2vec";
  std::string p_lexicon = pipeline.lexicon.string(), p_matrix = pipeline.matrix.string(),
              p_triggers = pipeline.triggers.string(), p_stopwords = pipeline.stopwords.string();
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write artifacts plus a manifest");
  pipeline_cmd->add_option("--out-dir", pipeline_out, "Output directory")->capture_default_str();
  pipeline_cmd->add_option("--seed", pipeline.seed, "Random seed")->capture_default_str();
  pipeline_cmd->add_option("--vocab-size", pipeline.subword_vocab_size, "Subword pieces")->capture_default_str();
  pipeline_cmd->add_option("--mode", pipeline_mode, "word2vec | fasttext")
      ->check(CLI::IsMember({"word2vec", "fasttext"}))
      ->capture_default_str();
  pipeline_cmd->add_option("--dim", pipeline.embed.dim, "Embedding dimension")->capture_default_str();
  pipeline_cmd->add_option("--window", pipeline.embed.window, "Context window")->capture_default_str();
  pipeline_cmd->add_option("--min-count", pipeline.embed.min_count, "Minimum word frequency")->capture_default_str();
  auto* p_epochs = pipeline_cmd->add_option("--epochs", pipeline.embed.epochs, "Embedding epochs");
  pipeline_cmd->add_option("--steps", pipeline.embed.steps, "Embedding SGD updates (0 = off)")->capture_default_str();
  pipeline_cmd->add_option("--buckets", pipeline.embed.buckets, "Hash buckets (fasttext)")->capture_default_str();
  auto* pk = pipeline_cmd->add_option("--k", pipeline.summary_k, "Summary sentences");
  auto* pr = pipeline_cmd->add_option("--ratio", pipeline.summary_ratio, "Summary ratio")->capture_default_str();
  pk->excludes(pr);
  pipeline_cmd->add_option("--lexicon", p_lexicon)->capture_default_str();
  pipeline_cmd->add_option("--matrix", p_matrix)->capture_default_str();
  pipeline_cmd->add_option("--triggers", p_triggers)->capture_default_str();
  pipeline_cmd->add_option("--stopwords", p_stopwords)->capture_default_str();
  pipeline_cmd->add_option("inputs", pipeline_inputs, "Corpus files")->required();

  if (argc < 2) {
    err << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  err << "# folkbangla " << kVersion << " " << active->get_name() << "\n";
  {
    std::istringstream cfg(active->config_to_str(true, false));
    std::string line;
    while (std::getline(cfg, line)) {
      if (!line.empty()) err << "#   " << line << "\n";
    }
  }

  try {
    if (active == tokenize_cmd) {
      const std::string text = normalize(detail::read_input(tok_input, in));
      if (tok_mode == "sentences") {
        for (const auto& s : segment_sentences(text)) {
          out << tsv_escape(s.slice(text)) << '\t' << s.start << '\t' << s.end << "\tSentence\n";
        }
      } else {
        const auto tokens = tok_mode == "punct" ? punct_tokenize(text) : basic_tokenize(text);
        for (const auto& t : tokens) out << t.surface << '\t' << t.start << '\t' << t.end << '\t' << to_string(t.kind) << '\n';
      }
    } else if (active == train_subword_cmd) {
      const auto corpus = load_corpus(detail::as_paths(subword_inputs));
      const auto model = train_subword(corpus, vocab_size);
      detail::write_or_print(subword_out, serialize(model), out);
      err << "# trained " << model.size() << " pieces, " << model.merges.size() << " merges\n";
    } else if (active == encode_cmd) {
      const auto model = load_model(encode_model);
      const std::string text = normalize(detail::read_input(encode_input, in));
      const auto seq = encode(model, text);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        out << seq.ids[i] << '\t' << model.id_to_piece[seq.ids[i]] << '\t' << seq.spans[i].first << '\t'
            << seq.spans[i].second << '\n';
      }
    } else if (active == train_embed_cmd) {
      const auto corpus = load_corpus(detail::as_paths(embed_inputs));
      const bool fasttext = embed_mode == "fasttext";
      if (fasttext && epochs_opt->count() == 0) embed.epochs = TrainConfig::fasttext_defaults().epochs;
      err << "#   epochs=" << embed.epochs << " (resolved)\n";
      std::vector<double> losses;
      KeyedVectors kv;
      if (fasttext) {
        const auto m = train_fasttext(corpus, embed);
        losses = m.epoch_loss;
        kv = keyed_vectors(m);
      } else {
        const auto m = train_skipgram(corpus, embed);
        losses = m.epoch_loss;
        kv = keyed_vectors(m);
      }
      std::ostringstream loss_tsv;
      for (std::size_t e = 0; e < losses.size(); ++e) loss_tsv << (e + 1) << '\t' << losses[e] << '\n';
      err << "# vocabulary " << kv.size() << " words; epoch mean loss first "
          << (losses.empty() ? 0.0 : losses.front()) << " last " << (losses.empty() ? 0.0 : losses.back()) << "\n";
      if (!embed_loss_out.empty()) write_file(embed_loss_out, loss_tsv.str());
      detail::write_or_print(embed_out, to_text_format(kv), out);
    } else if (active == nn_cmd) {
      const auto kv = load_text_format(nn_model);
      const std::string query = normalize(nn_word);
      for (const auto& n : nearest_neighbors(kv, query, nn_k)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", n.similarity);
        out << n.word << '\t' << buf << '\n';
      }
    } else if (active == characters_cmd) {
      const auto res = propp::Resources::load(lexicon_path, matrix_path, triggers_path, stopwords_path);
      weights.validate();
      const auto doc = detail::input_document(char_input, in);
      propp::MentionOptions options;
      options.proper_names = !no_proper_names;
      const auto assignments = propp::identify_characters(doc, res, weights, options);
      std::ostringstream preds;
      for (const auto& a : assignments) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", a.score);
        out << a.entity.canonical << '\t' << propp::name_of(a.role) << '\t' << buf << '\t' << a.entity.mentions.size()
            << '\n';
        preds << doc.id << '\t' << a.entity.canonical << '\t' << propp::name_of(a.role) << '\n';
      }
      if (!pred_out.empty()) write_file(pred_out, preds.str());
    } else if (active == summarize_cmd) {
      const auto stopwords = StopwordList::load(summary_stopwords);
      const auto doc = detail::input_document(summary_input, in);
      if (summary_scores) {
        const auto st = score_text(doc.normalized_text, stopwords);
        for (const auto& s : st.scores) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.6f", s.score);
          out << s.sentence_index << '\t' << buf << '\t' << tsv_escape(st.sentence(s.sentence_index)) << '\n';
        }
      } else {
        const auto summary = k_opt->count() > 0 ? summarize(doc, stopwords, summary_k)
                                                : summarize_ratio(doc, stopwords, summary_ratio);
        out << summary.text << '\n';
      }
    } else if (active == eval_cmd) {
      if (!model_names.empty() && model_names.size() != pred_paths.size()) {
        throw ConfigError("--name must be given once per --pred");
      }
      const auto gold = eval::load_gold(gold_path);
      std::vector<eval::EvalReport> reports;
      for (std::size_t i = 0; i < pred_paths.size(); ++i) {
        const auto pred = eval::ingest_external_predictions(pred_paths[i]);
        const std::string name =
            model_names.empty() ? std::filesystem::path(pred_paths[i]).stem().string() : model_names[i];
        reports.push_back(eval::evaluate(pred, gold, name,
                                         entity_only ? eval::MatchMode::EntityOnly : eval::MatchMode::EntityAndRole));
      }
      out << (eval_tsv ? eval::render_tsv(reports) : eval::render_table(reports));
    } else if (active == stats_cmd) {
      const auto corpus = load_corpus(detail::as_paths(stats_inputs));
      for (const auto& doc : corpus.documents) out << doc.id << '\t' << word_count(doc) << '\n';
      out << "total\t" << word_count(corpus) << '\n';
    } else if (active == pipeline_cmd) {
      pipeline.inputs = detail::as_paths(pipeline_inputs);
      pipeline.out_dir = pipeline_out;
      pipeline.lexicon = p_lexicon;
      pipeline.matrix = p_matrix;
      pipeline.triggers = p_triggers;
      pipeline.stopwords = p_stopwords;
      if (pipeline_mode == "fasttext") {
        pipeline.embed.model = EmbeddingModelType::SkipGramSubword;
        if (p_epochs->count() == 0) pipeline.embed.epochs = TrainConfig::fasttext_defaults().epochs;
      }
      const auto result = run_pipeline(pipeline);
      if (result.effective_min_count != pipeline.embed.min_count) {
        err << "# min-count lowered to " << result.effective_min_count << " so the vocabulary is not empty\n";
      }
      for (const auto& a : result.artifacts) out << a.string() << '\n';
      out << result.manifest.string() << '\n';
    }
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                    std::istream& in = std::cin) {
  std::vector<const char*> argv{"folkbangla"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err, in);
}

}  // namespace folkbangla::cli
