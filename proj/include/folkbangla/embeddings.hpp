#pragma once

// Skip-gram word embeddings with negative sampling, plus a subword variant
// whose center vector is the mean of the word vector and hashed character
// n-gram vectors.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"

namespace folkbangla {

using WordId = std::uint32_t;

struct Vocabulary {
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, WordId> index;
  std::uint64_t min_count = 1;

  std::size_t size() const { return words.size(); }
  bool empty() const { return words.empty(); }

  std::optional<WordId> find(std::string_view w) const {
    auto it = index.find(std::string(w));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/// Word-kind tokens of every sentence of every document.
inline std::vector<std::vector<std::string>> word_sentences(const Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  for (const auto& doc : corpus.documents) {
    const auto tokens = punct_tokenize(doc.normalized_text);
    std::size_t t = 0;
    for (const auto& span : segment_sentences(doc.normalized_text)) {
      std::vector<std::string> words;
      for (; t < tokens.size() && tokens[t].start < span.end; ++t) {
        if (tokens[t].kind == TokenKind::Word) words.push_back(tokens[t].surface);
      }
      if (!words.empty()) out.push_back(std::move(words));
    }
  }
  return out;
}

/// Retains words seen at least `min_count` times. Ids follow descending
/// count, ties by first occurrence.
inline Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_count) {
  std::unordered_map<std::string, std::pair<std::uint64_t, std::size_t>> seen;  // count, first position
  std::size_t position = 0;
  for (const auto& sentence : word_sentences(corpus)) {
    for (const auto& w : sentence) {
      auto [it, inserted] = seen.try_emplace(w, 0, position);
      ++it->second.first;
      ++position;
    }
  }
  std::vector<std::pair<std::string, std::pair<std::uint64_t, std::size_t>>> kept;
  for (auto& [w, info] : seen) {
    if (info.first >= min_count) kept.emplace_back(w, info);
  }
  if (kept.empty()) {
    throw TrainingError("vocabulary is empty after applying min_count " + std::to_string(min_count) +
                        "; lower min_count");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  Vocabulary vocab;
  vocab.min_count = min_count;
  for (auto& [w, info] : kept) {
    vocab.index.emplace(w, static_cast<WordId>(vocab.words.size()));
    vocab.words.push_back(w);
    vocab.counts.push_back(info.first);
  }
  return vocab;
}

enum class EmbeddingModelType { SkipGramWord, SkipGramSubword };

struct TrainConfig {
  std::size_t dim = 200;
  std::size_t window = 3;
  std::uint64_t min_count = 10;
  std::size_t negatives = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  std::size_t epochs = 20;
  /// When nonzero, training stops after this many (center, context) updates.
  std::uint64_t steps = 0;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  EmbeddingModelType model = EmbeddingModelType::SkipGramWord;
  // subword model only
  std::size_t min_n = 3;
  std::size_t max_n = 6;
  std::size_t buckets = std::size_t{1} << 18;

  static TrainConfig fasttext_defaults() {
    TrainConfig c;
    c.model = EmbeddingModelType::SkipGramSubword;
    c.epochs = 100;
    return c;
  }

  void validate() const {
    if (dim == 0) throw ConfigError("dim must be > 0");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(initial_lr > 0.0) || !(min_lr >= 0.0) || min_lr > initial_lr) throw ConfigError("bad learning rates");
    if (model == EmbeddingModelType::SkipGramSubword) {
      if (min_n < 1 || max_n < min_n) throw ConfigError("bad n-gram range");
      if (buckets < 1) throw ConfigError("buckets must be >= 1");
    }
  }
};

/// Row-major matrix of floats.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

  std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const float> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct EmbeddingMatrix {
  Vocabulary vocab;
  std::size_t dim = 0;
  Matrix input;
  Matrix output;
  /// Mean per-pair loss of each epoch.
  std::vector<double> epoch_loss;

  std::span<const float> word_vector(WordId id) const { return input.row(id); }
};

struct SubwordEmbeddingModel {
  Vocabulary vocab;
  std::size_t dim = 0;
  std::size_t min_n = 3;
  std::size_t max_n = 6;
  std::size_t buckets = 0;
  Matrix word_input;
  Matrix bucket_input;
  Matrix output;
  std::vector<double> epoch_loss;

  /// Bucket ids of the character n-grams of "<word>".
  std::vector<std::size_t> ngram_buckets(std::string_view word) const;

  /// Mean of word vector (if in vocabulary) and its n-gram vectors.
  std::vector<float> word_vector(std::string_view word) const;
};

// ---------------------------------------------------------------------------
// Negative sampling

/// Draws word ids with probability proportional to count^power.
class UnigramSampler {
 public:
  UnigramSampler() = default;
  explicit UnigramSampler(std::span<const std::uint64_t> counts, double power = 0.75) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), power);
      cumulative_.push_back(total);
    }
    for (auto& v : cumulative_) v /= total;
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
  }

  double probability(WordId id) const {
    return cumulative_[id] - (id == 0 ? 0.0 : cumulative_[id - 1]);
  }

  template <class Rng>
  WordId sample(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<WordId>(it - cumulative_.begin());
  }

  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// ---------------------------------------------------------------------------
// Negative-sampling objective
//
// For a center vector v, output vectors u_0 (the observed context word) and
// u_1..u_k (negatives):
//   L = -log s(u_0.v) - sum_n log s(-u_n.v)

template <class T>
T log_sigmoid(T x) {
  // log s(x) = -log(1 + e^-x), evaluated without overflow
  return x >= T(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <class T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Loss of one (center, context) pair; outputs[0] is the positive.
template <class T>
T sgns_loss(std::span<const T> center, const std::vector<std::span<const T>>& outputs) {
  T loss = -log_sigmoid(dot(outputs[0], center));
  for (std::size_t n = 1; n < outputs.size(); ++n) loss -= log_sigmoid(-dot(outputs[n], center));
  return loss;
}

/// Loss and analytic gradient. `grad_center` has center.size() entries;
/// `grad_outputs` holds outputs.size() * center.size() entries, row-major.
template <class T>
T sgns_loss_and_grad(std::span<const T> center, const std::vector<std::span<const T>>& outputs,
                     std::span<T> grad_center, std::span<T> grad_outputs) {
  const std::size_t d = center.size();
  std::fill(grad_center.begin(), grad_center.end(), T(0));
  T loss = T(0);
  for (std::size_t n = 0; n < outputs.size(); ++n) {
    const T score = dot(outputs[n], center);
    T g;  // dL/dscore
    if (n == 0) {
      loss -= log_sigmoid(score);
      g = sigmoid(score) - T(1);
    } else {
      loss -= log_sigmoid(-score);
      g = sigmoid(score);
    }
    for (std::size_t i = 0; i < d; ++i) {
      grad_center[i] += g * outputs[n][i];
      grad_outputs[n * d + i] = g * center[i];
    }
  }
  return loss;
}

// ---------------------------------------------------------------------------
// Subword hashing

/// 32-bit FNV-1a over the UTF-8 bytes.
inline std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

/// Character n-grams (in code points) of "<word>", lengths min_n..max_n.
inline std::vector<std::string> char_ngrams(std::string_view word, std::size_t min_n, std::size_t max_n) {
  const std::string wrapped = "<" + std::string(word) + ">";
  const auto cps = utf8::code_points(wrapped);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    for (std::size_t n = min_n; n <= max_n && i + n <= cps.size(); ++n) {
      out.push_back(wrapped.substr(cps[i].start, cps[i + n - 1].end - cps[i].start));
    }
  }
  return out;
}

inline std::vector<std::size_t> SubwordEmbeddingModel::ngram_buckets(std::string_view word) const {
  std::vector<std::size_t> ids;
  for (const auto& g : char_ngrams(word, min_n, max_n)) ids.push_back(fnv1a(g) % buckets);
  return ids;
}

inline std::vector<float> SubwordEmbeddingModel::word_vector(std::string_view word) const {
  std::vector<float> v(dim, 0.0f);
  std::size_t parts = 0;
  if (auto id = vocab.find(word)) {
    const auto row = word_input.row(*id);
    for (std::size_t i = 0; i < dim; ++i) v[i] += row[i];
    ++parts;
  }
  for (auto b : ngram_buckets(word)) {
    const auto row = bucket_input.row(b);
    for (std::size_t i = 0; i < dim; ++i) v[i] += row[i];
    ++parts;
  }
  if (parts > 0) {
    for (auto& x : v) x /= static_cast<float>(parts);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Training

namespace detail {

template <bool Shared>
inline float load(const float& x) {
  if constexpr (Shared) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

/// x += delta. In shared mode concurrent updates may be lost (Hogwild).
template <bool Shared>
inline void add(float& x, float delta) {
  if constexpr (Shared) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

struct TrainingCorpus {
  std::vector<std::vector<WordId>> sentences;
  std::uint64_t words = 0;
};

inline TrainingCorpus encode_corpus(const Corpus& corpus, const Vocabulary& vocab) {
  TrainingCorpus tc;
  for (const auto& sentence : word_sentences(corpus)) {
    std::vector<WordId> ids;
    for (const auto& w : sentence) {
      if (auto id = vocab.find(w)) ids.push_back(*id);
    }
    tc.words += ids.size();
    if (!ids.empty()) tc.sentences.push_back(std::move(ids));
  }
  return tc;
}

inline void init_uniform(Matrix& m, std::mt19937_64& rng, float half_width) {
  std::uniform_real_distribution<float> dist(-half_width, half_width);
  for (auto& x : m.data) x = dist(rng);
}

/// Center representation: one or more input rows averaged together.
struct CenterRows {
  std::vector<float*> rows;
};

struct Trainer {
  const TrainConfig& config;
  const Vocabulary& vocab;
  const TrainingCorpus& data;
  const UnigramSampler& sampler;
  Matrix& output;
  // Returns the input rows forming the center vector of word `id`.
  std::function<void(WordId, CenterRows&)> center_rows;

  std::uint64_t total_work = 0;  // words (epoch mode) or pair updates (steps mode)
  std::atomic<std::uint64_t> work_done{0};
  std::atomic<std::uint64_t> steps_done{0};

  double learning_rate() const {
    const double progress =
        std::min(1.0, static_cast<double>(work_done.load(std::memory_order_relaxed)) /
                          static_cast<double>(std::max<std::uint64_t>(total_work, 1)));
    return std::max(config.min_lr, config.initial_lr - (config.initial_lr - config.min_lr) * progress);
  }

  struct EpochStats {
    double loss = 0.0;
    std::uint64_t pairs = 0;
  };

  template <bool Shared>
  EpochStats run_sentences(std::size_t epoch, std::size_t begin, std::size_t end, std::mt19937_64& rng) {
    const std::size_t d = config.dim;
    std::vector<float> center(d), grad_center(d), grad_outputs((config.negatives + 1) * d);
    std::vector<float> out_rows((config.negatives + 1) * d);
    std::vector<WordId> targets(config.negatives + 1);
    std::vector<std::span<const float>> outputs(config.negatives + 1);
    CenterRows rows;
    std::uniform_int_distribution<std::size_t> window_dist(1, config.window);
    EpochStats stats;
    const bool step_mode = config.steps > 0;

    for (std::size_t s = begin; s < end; ++s) {
      const auto& sentence = data.sentences[s];
      for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
        if (step_mode && steps_done.load(std::memory_order_relaxed) >= config.steps) return stats;
        const WordId word = sentence[pos];
        const std::size_t reach = window_dist(rng);
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(sentence.size() - 1, pos + reach);
        rows.rows.clear();
        center_rows(word, rows);
        const float inv_parts = 1.0f / static_cast<float>(rows.rows.size());

        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          if (step_mode && steps_done.fetch_add(1, std::memory_order_relaxed) >= config.steps) return stats;
          const float lr = static_cast<float>(learning_rate());

          std::fill(center.begin(), center.end(), 0.0f);
          for (float* r : rows.rows) {
            for (std::size_t i = 0; i < d; ++i) center[i] += load<Shared>(r[i]);
          }
          for (auto& x : center) x *= inv_parts;

          targets[0] = sentence[c];
          for (std::size_t n = 1; n <= config.negatives; ++n) {
            WordId neg = sampler.sample(rng);
            while (neg == targets[0] && vocab.size() > 1) neg = sampler.sample(rng);
            targets[n] = neg;
          }
          for (std::size_t n = 0; n <= config.negatives; ++n) {
            const float* src = output.row(targets[n]).data();
            for (std::size_t i = 0; i < d; ++i) out_rows[n * d + i] = load<Shared>(src[i]);
            outputs[n] = std::span<const float>(out_rows.data() + n * d, d);
          }

          const float loss = sgns_loss_and_grad<float>(center, outputs, grad_center, grad_outputs);
          if (!std::isfinite(loss)) {
            throw TrainingError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", lr " +
                                std::to_string(lr) + ", pair (" + vocab.words[word] + ", " +
                                vocab.words[targets[0]] + ")");
          }
          stats.loss += loss;
          ++stats.pairs;

          for (std::size_t n = 0; n <= config.negatives; ++n) {
            float* dst = output.row(targets[n]).data();
            for (std::size_t i = 0; i < d; ++i) add<Shared>(dst[i], -lr * grad_outputs[n * d + i]);
          }
          // d(center)/d(row) = 1/parts for every contributing row
          for (float* r : rows.rows) {
            for (std::size_t i = 0; i < d; ++i) add<Shared>(r[i], -lr * inv_parts * grad_center[i]);
          }
          if (step_mode) work_done.fetch_add(1, std::memory_order_relaxed);
        }
        if (!step_mode) work_done.fetch_add(1, std::memory_order_relaxed);
      }
    }
    return stats;
  }

  std::vector<double> run() {
    const bool step_mode = config.steps > 0;
    total_work = step_mode ? config.steps : data.words * config.epochs;
    std::vector<double> history;
    std::vector<std::mt19937_64> rngs;
    for (std::size_t t = 0; t < config.threads; ++t) rngs.emplace_back(config.seed + 0x9E3779B97F4A7C15ull * (t + 1));
    for (std::size_t epoch = 0;; ++epoch) {
      if (!step_mode && epoch >= config.epochs) break;
      if (step_mode && steps_done.load() >= config.steps) break;
      EpochStats total;
      if (config.threads == 1) {
        total = run_sentences<false>(epoch, 0, data.sentences.size(), rngs[0]);
      } else {
        std::vector<EpochStats> parts(config.threads);
        std::vector<std::exception_ptr> errors(config.threads);
        std::vector<std::thread> pool;
        const std::size_t n = data.sentences.size();
        for (std::size_t t = 0; t < config.threads; ++t) {
          pool.emplace_back([&, t] {
            try {
              parts[t] = run_sentences<true>(epoch, n * t / config.threads, n * (t + 1) / config.threads, rngs[t]);
            } catch (...) {
              errors[t] = std::current_exception();
            }
          });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
        for (const auto& p : parts) {
          total.loss += p.loss;
          total.pairs += p.pairs;
        }
      }
      if (total.pairs == 0) {
        if (step_mode) break;
        throw TrainingError("corpus yields no training pairs (sentences too short for any context)");
      }
      history.push_back(total.loss / static_cast<double>(total.pairs));
    }
    return history;
  }
};

}  // namespace detail

/// Skip-gram with negative sampling over whole-word vectors.
inline EmbeddingMatrix train_skipgram(const Corpus& corpus, TrainConfig config) {
  config.model = EmbeddingModelType::SkipGramWord;
  config.validate();
  EmbeddingMatrix m;
  m.vocab = build_vocab(corpus, config.min_count);
  m.dim = config.dim;
  m.input = Matrix(m.vocab.size(), config.dim);
  m.output = Matrix(m.vocab.size(), config.dim);
  std::mt19937_64 init_rng(config.seed);
  detail::init_uniform(m.input, init_rng, 0.5f / static_cast<float>(config.dim));

  const auto data = detail::encode_corpus(corpus, m.vocab);
  const UnigramSampler sampler(m.vocab.counts);
  detail::Trainer trainer{config, m.vocab, data, sampler, m.output,
                          [&m](WordId id, detail::CenterRows& rows) { rows.rows.push_back(m.input.row(id).data()); }};
  m.epoch_loss = trainer.run();
  return m;
}

/// Skip-gram where the center vector averages the word vector and its
/// hashed character n-gram vectors.
inline SubwordEmbeddingModel train_fasttext(const Corpus& corpus, TrainConfig config) {
  config.model = EmbeddingModelType::SkipGramSubword;
  config.validate();
  SubwordEmbeddingModel m;
  m.vocab = build_vocab(corpus, config.min_count);
  m.dim = config.dim;
  m.min_n = config.min_n;
  m.max_n = config.max_n;
  m.buckets = config.buckets;
  m.word_input = Matrix(m.vocab.size(), config.dim);
  m.bucket_input = Matrix(config.buckets, config.dim);
  m.output = Matrix(m.vocab.size(), config.dim);
  std::mt19937_64 init_rng(config.seed);
  const float half = 1.0f / static_cast<float>(config.dim);
  detail::init_uniform(m.word_input, init_rng, half);
  detail::init_uniform(m.bucket_input, init_rng, half);

  std::vector<std::vector<std::size_t>> ngrams(m.vocab.size());
  for (std::size_t id = 0; id < m.vocab.size(); ++id) ngrams[id] = m.ngram_buckets(m.vocab.words[id]);

  const auto data = detail::encode_corpus(corpus, m.vocab);
  const UnigramSampler sampler(m.vocab.counts);
  detail::Trainer trainer{config, m.vocab, data, sampler, m.output, [&](WordId id, detail::CenterRows& rows) {
                            rows.rows.push_back(m.word_input.row(id).data());
                            for (auto b : ngrams[id]) rows.rows.push_back(m.bucket_input.row(b).data());
                          }};
  m.epoch_loss = trainer.run();
  return m;
}

// ---------------------------------------------------------------------------
// Queries and persistence

/// Plain word -> vector table, as stored in the word2vec text format.
struct KeyedVectors {
  std::vector<std::string> words;
  std::unordered_map<std::string, WordId> index;
  std::size_t dim = 0;
  Matrix vectors;

  std::size_t size() const { return words.size(); }

  std::optional<WordId> find(std::string_view w) const {
    auto it = index.find(std::string(w));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void add(std::string word, std::span<const float> v) {
    index.emplace(word, static_cast<WordId>(words.size()));
    words.push_back(std::move(word));
    vectors.data.insert(vectors.data.end(), v.begin(), v.end());
    vectors.rows = words.size();
    vectors.cols = dim;
  }

  static KeyedVectors empty(std::size_t dim) {
    KeyedVectors kv;
    kv.dim = dim;
    kv.vectors.cols = dim;
    return kv;
  }
};

inline KeyedVectors keyed_vectors(const EmbeddingMatrix& m) {
  auto kv = KeyedVectors::empty(m.dim);
  for (std::size_t id = 0; id < m.vocab.size(); ++id) kv.add(m.vocab.words[id], m.input.row(id));
  return kv;
}

inline KeyedVectors keyed_vectors(const SubwordEmbeddingModel& m) {
  auto kv = KeyedVectors::empty(m.dim);
  for (std::size_t id = 0; id < m.vocab.size(); ++id) kv.add(m.vocab.words[id], m.word_vector(m.vocab.words[id]));
  return kv;
}

inline double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

inline double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw ValidationError("cosine: dimension mismatch");
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine similarity is undefined for a zero vector");
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d += static_cast<double>(u[i]) * v[i];
  return std::clamp(d / (nu * nv), -1.0, 1.0);
}

struct Neighbor {
  std::string word;
  double similarity;
};

/// Top-k rows of `table` by cosine to `query`, skipping `exclude` and
/// zero rows. Ties go to the lower id.
inline std::vector<Neighbor> nearest_to_vector(const KeyedVectors& table, std::span<const float> query,
                                               std::size_t k, std::optional<WordId> exclude = std::nullopt) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (norm(query) == 0.0) throw ValidationError("query vector is zero");
  std::vector<std::pair<double, WordId>> scored;
  for (std::size_t id = 0; id < table.size(); ++id) {
    if (exclude && *exclude == id) continue;
    const auto row = table.vectors.row(id);
    if (norm(row) == 0.0) continue;
    scored.emplace_back(cosine(query, row), static_cast<WordId>(id));
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back({table.words[scored[i].second], scored[i].first});
  return out;
}

inline std::vector<Neighbor> nearest_neighbors(const KeyedVectors& table, std::string_view word, std::size_t k) {
  const auto id = table.find(word);
  if (!id) throw LookupError("word not in vocabulary: " + std::string(word));
  return nearest_to_vector(table, table.vectors.row(*id), k, id);
}

inline std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& m, std::string_view word, std::size_t k) {
  return nearest_neighbors(keyed_vectors(m), word, k);
}

/// Works for any word; out-of-vocabulary words are composed from n-grams.
inline std::vector<Neighbor> nearest_neighbors(const SubwordEmbeddingModel& m, std::string_view word,
                                               std::size_t k) {
  const auto table = keyed_vectors(m);
  const auto query = m.word_vector(word);
  return nearest_to_vector(table, query, k, table.find(word));
}

inline std::string to_text_format(const KeyedVectors& kv) {
  std::string out = std::to_string(kv.size()) + " " + std::to_string(kv.dim) + "\n";
  char buf[64];
  for (std::size_t id = 0; id < kv.size(); ++id) {
    out += kv.words[id];
    for (float x : kv.vectors.row(id)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out += ' ';
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

inline KeyedVectors parse_text_format(std::string_view content, const std::string& source = "<vectors>") {
  std::istringstream in{std::string(content)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header '<count> <dim>'");
  std::size_t count = 0, dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> count >> dim) || (header >> extra)) throw ParseError(source, 1, "header must be '<count> <dim>'");
  }
  auto kv = KeyedVectors::empty(dim);
  std::vector<float> row(dim);
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    if (kv.size() == count) throw ParseError(source, ln, "more rows than the header's count " + std::to_string(count));
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (!rest.empty()) {
      const auto sp = rest.find(' ');
      const auto field = rest.substr(0, sp);
      if (!field.empty()) fields.push_back(field);
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    if (fields.size() != dim + 1) {
      throw ParseError(source, ln,
                       "expected word and " + std::to_string(dim) + " values, got " + std::to_string(fields.size()) +
                           " fields");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      const auto f = fields[i + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(source, ln, "bad number '" + std::string(f) + "'");
      }
    }
    if (kv.find(fields[0])) throw ParseError(source, ln, "duplicate word '" + std::string(fields[0]) + "'");
    kv.add(std::string(fields[0]), row);
  }
  if (kv.size() != count) {
    throw ParseError(source, ln, "header promises " + std::to_string(count) + " rows, found " + std::to_string(kv.size()));
  }
  return kv;
}

inline void save_text_format(const KeyedVectors& kv, const std::filesystem::path& path) {
  write_file(path, to_text_format(kv));
}

inline KeyedVectors load_text_format(const std::filesystem::path& path) {
  return parse_text_format(read_file(path), path.string());
}

}  // namespace folkbangla
