#pragma once

// Loading and normalization of raw Bengali folklore text.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "folkbangla/error.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"

#ifndef FOLKBANGLA_DATA_DIR
#define FOLKBANGLA_DATA_DIR "data"
#endif

namespace folkbangla {

/// Directory holding the bundled stopwords, lexicon, role matrix and triggers.
/// FOLKBANGLA_DATA overrides the compiled-in location.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("FOLKBANGLA_DATA"); env != nullptr && *env != '\0') return env;
  return FOLKBANGLA_DATA_DIR;
}

inline std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString composed = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  composed.toUTF8String(out);
  return out;
}

/// NFC, CRLF/CR to LF, space/tab runs collapsed to one space, and no space
/// before a danda or double danda. Idempotent.
inline std::string normalize(std::string_view text) {
  const std::string composed = nfc(text);
  std::string out;
  out.reserve(composed.size());
  for (std::size_t i = 0; i < composed.size(); ++i) {
    const char c = composed[i];
    if (c == '\r') {
      if (i + 1 < composed.size() && composed[i + 1] == '\n') continue;
      out.push_back('\n');
    } else if (c == ' ' || c == '\t') {
      if (out.empty() || out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  // "text ।" -> "text।"
  static constexpr std::string_view kDanda = "।";
  static constexpr std::string_view kDoubleDanda = "॥";
  std::string result;
  result.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == ' ') {
      std::string_view rest = std::string_view(out).substr(i + 1);
      if (rest.starts_with(kDanda) || rest.starts_with(kDoubleDanda)) continue;
    }
    result.push_back(out[i]);
  }
  return result;
}

struct Document {
  std::string id;
  std::string raw_text;
  std::string normalized_text;
  std::string source_path;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;

  bool empty() const { return documents.empty(); }
};

inline std::string read_file(const std::filesystem::path& path) {
  if (path.empty()) throw LoadError("empty path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw LoadError("read failed: " + path.string());
  return content;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.empty()) throw LoadError("empty path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError("cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw LoadError("write failed: " + path.string());
}

inline Document make_document(std::string id, std::string raw, std::string source_path = {}) {
  if (auto bad = utf8::find_invalid(raw)) {
    throw DecodeError("invalid UTF-8 in " + (source_path.empty() ? id : source_path), *bad);
  }
  Document doc;
  doc.id = std::move(id);
  doc.normalized_text = normalize(raw);
  doc.raw_text = std::move(raw);
  doc.source_path = std::move(source_path);
  return doc;
}

/// One Document per file, in input order. Ids are file stems, suffixed "#2",
/// "#3", ... when two files share a stem.
inline Corpus load_corpus(const std::vector<std::filesystem::path>& paths, std::string name = "corpus") {
  Corpus corpus;
  corpus.name = std::move(name);
  std::set<std::string> used;
  for (const auto& path : paths) {
    if (!std::filesystem::exists(path)) throw LoadError("no such file: " + path.string());
    std::string id = path.stem().string();
    if (id.empty()) id = "doc";
    std::string unique = id;
    for (int n = 2; used.contains(unique); ++n) unique = id + "#" + std::to_string(n);
    used.insert(unique);
    corpus.documents.push_back(make_document(unique, read_file(path), path.string()));
  }
  return corpus;
}

inline std::size_t word_count(const Document& doc) {
  std::size_t n = 0;
  for (const auto& t : basic_tokenize(doc.normalized_text)) {
    if (t.kind == TokenKind::Word) ++n;
  }
  return n;
}

/// Number of Word tokens from basic_tokenize over all documents.
inline std::size_t word_count(const Corpus& corpus) {
  return std::accumulate(corpus.documents.begin(), corpus.documents.end(), std::size_t{0},
                         [](std::size_t acc, const Document& d) { return acc + word_count(d); });
}

struct StopwordList {
  std::unordered_set<std::string> words;

  bool contains(std::string_view w) const { return words.contains(std::string(w)); }
  std::size_t size() const { return words.size(); }

  /// One word per line, '#' lines ignored. Entries are normalized.
  static StopwordList parse(std::string_view content, const std::string& source = "<stopwords>") {
    if (auto bad = utf8::find_invalid(content)) throw DecodeError("invalid UTF-8 in " + source, *bad);
    StopwordList list;
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
      std::string word = normalize(line);
      while (!word.empty() && (word.back() == ' ' || word.back() == '\n')) word.pop_back();
      while (!word.empty() && word.front() == ' ') word.erase(word.begin());
      if (word.empty() || word.front() == '#') continue;
      list.words.insert(std::move(word));
    }
    return list;
  }

  static StopwordList load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
  }

  static StopwordList bundled() { return load(default_data_dir() / "stopwords_bn.txt"); }
};

}  // namespace folkbangla
