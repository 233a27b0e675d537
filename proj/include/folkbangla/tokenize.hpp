#pragma once

// Rule-based Bengali tokenizers and sentence segmentation.
//
// All offsets are byte offsets into the (normalized) input text.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "folkbangla/utf8.hpp"

namespace folkbangla {

enum class TokenKind { Word, Punct, Number, Other };

inline std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "Word";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Number: return "Number";
    case TokenKind::Other: return "Other";
  }
  return "Other";
}

struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  TokenKind kind = TokenKind::Other;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;

  std::string_view slice(std::string_view text) const { return text.substr(start, end - start); }

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

/// Code points split off as standalone tokens by punct_tokenize.
struct PunctuationSet {
  std::u32string chars;

  static PunctuationSet bengali_default() {
    return {U"।॥?!,;:\"'()-—…."};
  }

  bool contains(char32_t cp) const { return chars.find(cp) != std::u32string::npos; }
};

/// Sentence terminators. ASCII '.' is handled separately (only before whitespace/end).
inline bool is_sentence_terminator(char32_t cp) {
  return cp == 0x0964 || cp == 0x0965 || cp == U'?' || cp == U'!';
}

inline TokenKind classify(std::string_view surface,
                          const PunctuationSet& punct = PunctuationSet::bengali_default()) {
  const auto cps = utf8::code_points(surface);
  if (cps.empty()) return TokenKind::Other;
  bool all_punct = true;
  bool all_digit = true;
  bool any_alpha = false;
  for (const auto& cp : cps) {
    all_punct = all_punct && punct.contains(cp.value);
    all_digit = all_digit && utf8::is_digit(cp.value);
    any_alpha = any_alpha || utf8::is_alphabetic(cp.value);
  }
  if (all_punct) return TokenKind::Punct;
  if (all_digit) return TokenKind::Number;
  if (any_alpha) return TokenKind::Word;
  return TokenKind::Other;
}

/// Splits on Unicode whitespace only; punctuation stays attached.
inline std::vector<Token> basic_tokenize(std::string_view text,
                                         const PunctuationSet& punct = PunctuationSet::bengali_default()) {
  std::vector<Token> tokens;
  std::size_t start = 0;
  bool in_token = false;
  for (const auto& cp : utf8::code_points(text)) {
    if (utf8::is_whitespace(cp.value)) {
      if (in_token) {
        std::string surface(text.substr(start, cp.start - start));
        auto kind = classify(surface, punct);
        tokens.push_back({std::move(surface), start, cp.start, kind});
        in_token = false;
      }
    } else if (!in_token) {
      start = cp.start;
      in_token = true;
    }
  }
  if (in_token) {
    std::string surface(text.substr(start));
    auto kind = classify(surface, punct);
    tokens.push_back({std::move(surface), start, text.size(), kind});
  }
  return tokens;
}

/// basic_tokenize, then every punctuation code point becomes its own Punct token.
inline std::vector<Token> punct_tokenize(std::string_view text,
                                         const PunctuationSet& punct = PunctuationSet::bengali_default()) {
  std::vector<Token> tokens;
  for (const auto& chunk : basic_tokenize(text, punct)) {
    std::string_view body(chunk.surface);
    std::size_t run_start = 0;
    bool in_run = false;
    auto flush = [&](std::size_t run_end) {
      std::string surface(body.substr(run_start, run_end - run_start));
      auto kind = classify(surface, punct);
      tokens.push_back({std::move(surface), chunk.start + run_start, chunk.start + run_end, kind});
      in_run = false;
    };
    for (const auto& cp : utf8::code_points(body)) {
      if (punct.contains(cp.value)) {
        if (in_run) flush(cp.start);
        tokens.push_back({std::string(body.substr(cp.start, cp.end - cp.start)), chunk.start + cp.start,
                          chunk.start + cp.end, TokenKind::Punct});
      } else if (!in_run) {
        run_start = cp.start;
        in_run = true;
      }
    }
    if (in_run) flush(body.size());
  }
  return tokens;
}

/// Sentences end at ।, ॥, ?, ! (and '.' before whitespace or end of text).
/// Consecutive terminators stay in the same sentence. Spans never include
/// leading or trailing whitespace.
inline std::vector<SentenceSpan> segment_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  const auto cps = utf8::code_points(text);
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    while (i < n && utf8::is_whitespace(cps[i].value)) ++i;
    if (i == n) break;
    const std::size_t start = cps[i].start;
    std::size_t last_non_ws = i;
    while (i < n) {
      const char32_t c = cps[i].value;
      const bool period_end = c == U'.' && (i + 1 == n || utf8::is_whitespace(cps[i + 1].value));
      if (is_sentence_terminator(c) || period_end) {
        while (i + 1 < n && (is_sentence_terminator(cps[i + 1].value) ||
                             (cps[i + 1].value == U'.' &&
                              (i + 2 == n || utf8::is_whitespace(cps[i + 2].value))))) {
          ++i;
        }
        last_non_ws = i;
        ++i;
        break;
      }
      if (!utf8::is_whitespace(c)) last_non_ws = i;
      ++i;
    }
    spans.push_back({start, cps[last_non_ws].end, spans.size()});
  }
  return spans;
}

/// Punct-tokenized tokens whose span lies inside `sentence`.
inline std::vector<Token> tokens_in(const std::vector<Token>& tokens, const SentenceSpan& sentence) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (t.start >= sentence.start && t.end <= sentence.end) out.push_back(t);
  }
  return out;
}

}  // namespace folkbangla
