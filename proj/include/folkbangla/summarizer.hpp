#pragma once

// Extractive summarization by normalized word frequency:
//   strip special characters, tokenize, drop stopwords and count words,
//   score sentences by summed normalized frequency, and join the top
//   sentences back into one paragraph in their original order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"

namespace folkbangla {

/// Keeps Bengali-block code points, ASCII letters and digits, whitespace and
/// the terminators । ॥ ? !; collapses whitespace runs and trims the ends.
inline std::string strip_special(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const auto& cp : utf8::code_points(text)) {
    const char32_t c = cp.value;
    if (utf8::is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    const bool ascii_alnum = (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
    if (!(utf8::is_bengali(c) || ascii_alnum || is_sentence_terminator(c))) continue;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, c);
  }
  return out;
}

struct SentenceScore {
  std::size_t sentence_index = 0;
  double score = 0.0;
};

/// Sentences of a document with their cleaned, stopword-free words.
struct ScoredText {
  std::string text;
  std::vector<SentenceSpan> sentences;
  std::vector<std::vector<std::string>> words;
  std::vector<SentenceScore> scores;

  std::string_view sentence(std::size_t i) const { return sentences[i].slice(text); }
};

/// Sentences are segmented on the normalized text; each is stripped of
/// special characters and tokenized. f(w) counts non-stopword words over the
/// document, n(w) = f(w) / max f, and a sentence scores the sum of n(w) over
/// its words (with repetition).
inline ScoredText score_text(std::string_view normalized_text, const StopwordList& stopwords) {
  ScoredText st;
  st.text = std::string(normalized_text);
  st.sentences = segment_sentences(st.text);
  std::map<std::string, std::size_t> freq;
  for (const auto& s : st.sentences) {
    std::vector<std::string> words;
    for (const auto& tok : punct_tokenize(strip_special(s.slice(st.text)))) {
      if (tok.kind != TokenKind::Word || stopwords.contains(tok.surface)) continue;
      ++freq[tok.surface];
      words.push_back(tok.surface);
    }
    st.words.push_back(std::move(words));
  }
  std::size_t max_f = 0;
  for (const auto& [w, f] : freq) max_f = std::max(max_f, f);
  for (std::size_t i = 0; i < st.sentences.size(); ++i) {
    double score = 0.0;
    if (max_f > 0) {
      for (const auto& w : st.words[i]) score += static_cast<double>(freq[w]) / static_cast<double>(max_f);
    }
    st.scores.push_back({i, score});
  }
  return st;
}

inline std::vector<SentenceScore> score_sentences(const Document& doc, const StopwordList& stopwords) {
  return score_text(doc.normalized_text, stopwords).scores;
}

struct Summary {
  std::vector<std::size_t> selected;
  std::string text;
};

namespace detail {

inline Summary select_top(const ScoredText& st, std::size_t k) {
  std::vector<std::size_t> order(st.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return st.scores[a].score > st.scores[b].score; });
  order.resize(std::min(k, order.size()));
  std::sort(order.begin(), order.end());
  Summary summary;
  summary.selected = order;
  for (std::size_t i : order) {
    if (!summary.text.empty()) summary.text.push_back(' ');
    summary.text += st.sentence(i);
  }
  return summary;
}

}  // namespace detail

/// The k best sentences (ties to the earlier one) in original order.
inline Summary summarize(const Document& doc, const StopwordList& stopwords, std::size_t k) {
  if (k < 1) throw ConfigError("summary length k must be >= 1");
  return detail::select_top(score_text(doc.normalized_text, stopwords), k);
}

/// Keeps ceil(ratio * sentence count) sentences.
inline Summary summarize_ratio(const Document& doc, const StopwordList& stopwords, double ratio = 0.3) {
  if (!(ratio > 0.0) || ratio > 1.0) throw ConfigError("summary ratio must lie in (0, 1]");
  const auto st = score_text(doc.normalized_text, stopwords);
  const auto k = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(st.sentences.size()) - 1e-9));
  return detail::select_top(st, std::max<std::size_t>(k, 1));
}

}  // namespace folkbangla
