#pragma once

// End-to-end run: tokenize -> train-subword -> train-embed -> characters ->
// summarize, each writing one artifact, plus a manifest of hashes.

#include <array>
#include <cstdio>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include <openssl/evp.h>

#include "folkbangla/corpus.hpp"
#include "folkbangla/embeddings.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/propp.hpp"
#include "folkbangla/subword.hpp"
#include "folkbangla/summarizer.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/version.hpp"

namespace folkbangla {

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

/// Escapes tab, newline and backslash so a field fits on one TSV line.
inline std::string tsv_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out_dir = "folkbangla-out";
  std::uint64_t seed = 42;
  std::size_t subword_vocab_size = 500;
  TrainConfig embed;
  std::size_t summary_k = 0;  ///< 0 selects by ratio
  double summary_ratio = 0.3;
  std::filesystem::path lexicon;
  std::filesystem::path matrix;
  std::filesystem::path triggers;
  std::filesystem::path stopwords;

  static PipelineConfig with_bundled_data() {
    PipelineConfig c;
    const auto dir = default_data_dir();
    c.lexicon = dir / "lexicon.tsv";
    c.matrix = dir / "role_matrix.tsv";
    c.triggers = dir / "triggers.tsv";
    c.stopwords = dir / "stopwords_bn.txt";
    return c;
  }
};

struct PipelineResult {
  std::vector<std::filesystem::path> artifacts;
  std::filesystem::path manifest;
  std::uint64_t effective_min_count = 0;
};

namespace detail {

/// Largest min_count <= requested that leaves a non-empty vocabulary.
inline std::uint64_t feasible_min_count(const Corpus& corpus, std::uint64_t requested) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& sentence : word_sentences(corpus)) {
    for (const auto& w : sentence) ++counts[w];
  }
  std::uint64_t best = 0;
  for (const auto& [w, c] : counts) best = std::max(best, c);
  return std::min(requested, best);
}

}  // namespace detail

inline PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  std::string stage = "tokenize";
  nlohmann::ordered_json manifest;
  try {
    if (config.inputs.empty()) throw LoadError("no input files");
    const Corpus corpus = load_corpus(config.inputs);
    std::filesystem::create_directories(config.out_dir);
    auto emit = [&](const std::string& name, const std::string& content) {
      const auto path = config.out_dir / name;
      write_file(path, content);
      result.artifacts.push_back(path);
      manifest["artifacts"].push_back({{"file", name}, {"sha256", sha256_hex(content)}});
    };

    manifest["tool"] = "folkbangla";
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    for (const auto& doc : corpus.documents) {
      manifest["inputs"].push_back({{"path", doc.source_path}, {"sha256", sha256_hex(doc.raw_text)}});
    }
    manifest["artifacts"] = nlohmann::ordered_json::array();

    {
      std::ostringstream out;
      for (const auto& doc : corpus.documents) {
        for (const auto& t : punct_tokenize(doc.normalized_text)) {
          out << doc.id << '\t' << t.surface << '\t' << t.start << '\t' << t.end << '\t' << to_string(t.kind) << '\n';
        }
      }
      emit("tokens.tsv", out.str());
    }

    stage = "train-subword";
    {
      const auto model = train_subword(corpus, config.subword_vocab_size);
      manifest["subword"] = {{"vocab_size", config.subword_vocab_size}, {"pieces", model.size()},
                             {"merges", model.merges.size()}};
      emit("subword.bpe", serialize(model));
    }

    stage = "train-embed";
    {
      TrainConfig tc = config.embed;
      tc.seed = config.seed;
      tc.threads = 1;
      result.effective_min_count = detail::feasible_min_count(corpus, tc.min_count);
      tc.min_count = result.effective_min_count;
      const bool subword = tc.model == EmbeddingModelType::SkipGramSubword;
      manifest["embeddings"] = {{"mode", subword ? "fasttext" : "word2vec"},
                                {"dim", tc.dim},
                                {"window", tc.window},
                                {"min_count_requested", config.embed.min_count},
                                {"min_count", tc.min_count},
                                {"negatives", tc.negatives},
                                {"epochs", tc.epochs},
                                {"steps", tc.steps}};
      std::vector<double> losses;
      KeyedVectors kv;
      if (subword) {
        const auto m = train_fasttext(corpus, tc);
        losses = m.epoch_loss;
        kv = keyed_vectors(m);
      } else {
        const auto m = train_skipgram(corpus, tc);
        losses = m.epoch_loss;
        kv = keyed_vectors(m);
      }
      manifest["embeddings"]["epoch_loss"] = losses;
      emit("vectors.txt", to_text_format(kv));
    }

    stage = "characters";
    {
      const auto res = propp::Resources::load(config.lexicon, config.matrix, config.triggers, config.stopwords);
      std::ostringstream out;
      char score[32];
      for (const auto& doc : corpus.documents) {
        for (const auto& a : propp::identify_characters(doc, res)) {
          std::snprintf(score, sizeof score, "%.6f", a.score);
          out << doc.id << '\t' << a.entity.canonical << '\t' << propp::name_of(a.role) << '\t' << score << '\t'
              << a.entity.mentions.size() << '\n';
        }
      }
      emit("characters.tsv", out.str());
    }

    stage = "summarize";
    {
      const auto stopwords = StopwordList::load(config.stopwords);
      std::string out;
      for (const auto& doc : corpus.documents) {
        const auto summary = config.summary_k > 0 ? summarize(doc, stopwords, config.summary_k)
                                                  : summarize_ratio(doc, stopwords, config.summary_ratio);
        out += summary.text + "\n";
      }
      emit("summary.txt", out);
    }

    const auto manifest_text = manifest.dump(2) + "\n";
    result.manifest = config.out_dir / "manifest.json";
    write_file(result.manifest, manifest_text);
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
  return result;
}

}  // namespace folkbangla
