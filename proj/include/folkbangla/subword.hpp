#pragma once

// Byte-pair-encoding subword model over Unicode code points.
//
// Words are whitespace-delimited. Each word is split into code points and
// terminated with an end-of-word marker piece; merges are learned greedily
// by pair frequency with lexicographic tie-breaking, which keeps training
// fully deterministic.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"

namespace folkbangla {

using PieceId = std::uint32_t;

struct SubwordModel {
  static constexpr PieceId kUnk = 0;
  static constexpr PieceId kBos = 1;
  static constexpr PieceId kEos = 2;
  static constexpr PieceId kEndOfWord = 3;
  static constexpr std::size_t kNumSpecials = 4;

  static constexpr std::string_view kUnkPiece = "<unk>";
  static constexpr std::string_view kBosPiece = "<s>";
  static constexpr std::string_view kEosPiece = "</s>";
  static constexpr std::string_view kEndOfWordPiece = "▁";
  /// Emitted by decode for UNK ids.
  static constexpr std::string_view kUnkGlyph = "⁇";

  std::vector<std::string> id_to_piece;
  std::unordered_map<std::string, PieceId> piece_to_id;
  std::vector<std::pair<std::string, std::string>> merges;
  std::set<char32_t> alphabet;

  std::size_t size() const { return id_to_piece.size(); }

  std::optional<PieceId> find(std::string_view piece) const {
    auto it = piece_to_id.find(std::string(piece));
    if (it == piece_to_id.end()) return std::nullopt;
    return it->second;
  }

  PieceId add_piece(const std::string& piece) {
    if (auto id = find(piece)) return *id;
    const auto id = static_cast<PieceId>(id_to_piece.size());
    id_to_piece.push_back(piece);
    piece_to_id.emplace(piece, id);
    return id;
  }

  static SubwordModel with_specials() {
    SubwordModel m;
    m.add_piece(std::string(kUnkPiece));
    m.add_piece(std::string(kBosPiece));
    m.add_piece(std::string(kEosPiece));
    m.add_piece(std::string(kEndOfWordPiece));
    return m;
  }

  friend bool operator==(const SubwordModel& a, const SubwordModel& b) {
    return a.id_to_piece == b.id_to_piece && a.merges == b.merges && a.alphabet == b.alphabet;
  }
};

struct PieceSequence {
  std::vector<PieceId> ids;
  /// Byte span [first, second) of each id in the encoded text.
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
};

namespace detail {

/// Working symbol during training/encoding. `piece` is empty for UNK symbols,
/// which never take part in merges.
struct Symbol {
  std::string piece;
  std::size_t start;
  std::size_t end;
};

inline bool is_special_string(std::string_view s) {
  return s == SubwordModel::kUnkPiece || s == SubwordModel::kBosPiece || s == SubwordModel::kEosPiece ||
         s == SubwordModel::kEndOfWordPiece;
}

inline std::vector<std::string> word_symbols(std::string_view word) {
  std::vector<std::string> out;
  for (const auto& cp : utf8::code_points(word)) out.push_back(utf8::encode(cp.value));
  out.emplace_back(SubwordModel::kEndOfWordPiece);
  return out;
}

}  // namespace detail

/// Trains a BPE model until it holds `vocab_size` pieces or no pair occurs
/// at least twice.
inline SubwordModel train_subword(const Corpus& corpus, std::size_t vocab_size) {
  std::map<std::string, std::size_t> word_freq;
  for (const auto& doc : corpus.documents) {
    for (const auto& t : basic_tokenize(doc.normalized_text)) ++word_freq[t.surface];
  }
  if (word_freq.empty()) throw TrainingError("cannot train subword model on an empty corpus");

  SubwordModel model = SubwordModel::with_specials();
  const std::string marker_char(SubwordModel::kEndOfWordPiece);

  struct WordEntry {
    std::vector<std::string> symbols;
    std::size_t freq;
  };
  std::vector<WordEntry> words;
  for (const auto& [word, freq] : word_freq) {
    for (const auto& cp : utf8::code_points(word)) {
      if (utf8::encode(cp.value) != marker_char) model.alphabet.insert(cp.value);
    }
  }
  if (vocab_size < model.alphabet.size() + SubwordModel::kNumSpecials) {
    throw ConfigError("vocab_size " + std::to_string(vocab_size) + " is smaller than alphabet (" +
                      std::to_string(model.alphabet.size()) + ") plus specials (" +
                      std::to_string(SubwordModel::kNumSpecials) + ")");
  }
  for (char32_t c : model.alphabet) model.add_piece(utf8::encode(c));

  for (const auto& [word, freq] : word_freq) {
    WordEntry entry{detail::word_symbols(word), freq};
    // a literal marker character in the text is not a mergeable symbol
    for (std::size_t i = 0; i + 1 < entry.symbols.size(); ++i) {
      if (entry.symbols[i] == marker_char) entry.symbols[i].clear();
    }
    words.push_back(std::move(entry));
  }

  while (model.size() < vocab_size) {
    std::map<std::pair<std::string, std::string>, std::size_t> pair_freq;
    for (const auto& w : words) {
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        const auto& a = w.symbols[i];
        const auto& b = w.symbols[i + 1];
        if (a.empty() || b.empty()) continue;
        if (detail::is_special_string(a + b)) continue;
        pair_freq[{a, b}] += w.freq;
      }
    }
    // std::map iterates in lexicographic (left, right) order, so the first
    // maximum found is the tie-break winner.
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_freq = 0;
    for (const auto& [pair, freq] : pair_freq) {
      if (freq > best_freq) {
        best = &pair;
        best_freq = freq;
      }
    }
    if (best == nullptr || best_freq < 2) break;
    const auto merged_left = best->first;
    const auto merged_right = best->second;
    const std::string merged = merged_left + merged_right;
    model.merges.emplace_back(merged_left, merged_right);
    model.add_piece(merged);
    for (auto& w : words) {
      std::vector<std::string> next;
      next.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == merged_left && w.symbols[i + 1] == merged_right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(std::move(w.symbols[i]));
        }
      }
      w.symbols = std::move(next);
    }
  }
  return model;
}

namespace detail {

inline std::vector<Symbol> encode_word(const SubwordModel& model,
                                       const std::map<std::pair<std::string, std::string>, std::size_t>& ranks,
                                       const Token& word) {
  std::vector<Symbol> symbols;
  for (const auto& cp : utf8::code_points(word.surface)) {
    std::string piece = model.alphabet.contains(cp.value) ? utf8::encode(cp.value) : std::string();
    symbols.push_back({std::move(piece), word.start + cp.start, word.start + cp.end});
  }
  symbols.push_back({std::string(SubwordModel::kEndOfWordPiece), word.end, word.end});

  // Repeatedly merge the lowest-ranked adjacent pair; equivalent to applying
  // the merge list in order.
  while (symbols.size() > 1) {
    std::size_t best_rank = ranks.size();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      if (symbols[i].piece.empty() || symbols[i + 1].piece.empty()) continue;
      auto it = ranks.find({symbols[i].piece, symbols[i + 1].piece});
      if (it != ranks.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == ranks.size()) break;
    const auto& [left, right] = model.merges[best_rank];
    std::vector<Symbol> next;
    next.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && !symbols[i].piece.empty() && symbols[i].piece == left &&
          symbols[i + 1].piece == right) {
        next.push_back({left + right, symbols[i].start, symbols[i + 1].end});
        ++i;
      } else {
        next.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(next);
  }
  return symbols;
}

inline std::map<std::pair<std::string, std::string>, std::size_t> merge_ranks(const SubwordModel& model) {
  std::map<std::pair<std::string, std::string>, std::size_t> ranks;
  for (std::size_t r = 0; r < model.merges.size(); ++r) ranks.emplace(model.merges[r], r);
  return ranks;
}

}  // namespace detail

/// Encodes whitespace-separated words. Characters outside the training
/// alphabet become UNK.
inline PieceSequence encode(const SubwordModel& model, std::string_view text) {
  PieceSequence seq;
  const auto ranks = detail::merge_ranks(model);
  for (const auto& word : basic_tokenize(text)) {
    for (auto& sym : detail::encode_word(model, ranks, word)) {
      PieceId id = SubwordModel::kUnk;
      if (!sym.piece.empty()) {
        auto found = model.find(sym.piece);
        id = found ? *found : SubwordModel::kUnk;
      }
      seq.ids.push_back(id);
      seq.spans.emplace_back(sym.start, sym.end);
    }
  }
  return seq;
}

/// Concatenates pieces; each end-of-word marker becomes a single space
/// between words. UNK renders as "⁇".
inline std::string decode(const SubwordModel& model, const std::vector<PieceId>& ids) {
  std::string out;
  const std::string marker(SubwordModel::kEndOfWordPiece);
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const PieceId id = ids[pos];
    if (id >= model.size()) {
      throw DecodeError("piece id " + std::to_string(id) + " at sequence position " + std::to_string(pos) +
                            " out of range (model has " + std::to_string(model.size()) + " pieces)",
                        pos);
    }
    switch (id) {
      case SubwordModel::kUnk: out += SubwordModel::kUnkGlyph; break;
      case SubwordModel::kBos:
      case SubwordModel::kEos: break;
      default: out += model.id_to_piece[id];
    }
  }
  std::string text;
  text.reserve(out.size());
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (out.compare(pos, marker.size(), marker) == 0) {
      text.push_back(' ');
      pos += marker.size();
    } else {
      text.push_back(out[pos++]);
    }
  }
  if (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

inline std::string decode(const SubwordModel& model, const PieceSequence& seq) { return decode(model, seq.ids); }

// Text format:
//   folkbangla-bpe v1
//   #pieces <count>
//   <id>\t<piece>            (count lines)
//   #merges <count>
//   <left>\t<right>          (count lines, application order)

inline std::string serialize(const SubwordModel& model) {
  std::ostringstream out;
  out << "folkbangla-bpe v1\n";
  out << "#pieces " << model.size() << "\n";
  for (std::size_t id = 0; id < model.size(); ++id) out << id << '\t' << model.id_to_piece[id] << '\n';
  out << "#merges " << model.merges.size() << "\n";
  for (const auto& [l, r] : model.merges) out << l << '\t' << r << '\n';
  return out.str();
}

inline SubwordModel parse_subword_model(std::string_view content, const std::string& source = "<model>") {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::size_t ln = 0;
  auto fail = [&](std::size_t line, const std::string& what) -> ParseError { return {source, line, what}; };
  auto next_line = [&](const char* expected) -> const std::string& {
    if (ln >= lines.size()) throw fail(ln + 1, std::string("unexpected end of file, expected ") + expected);
    return lines[ln++];
  };
  auto section_count = [&](const std::string& line, std::string_view tag) -> std::size_t {
    const std::string prefix = std::string(tag) + " ";
    if (!line.starts_with(prefix)) throw fail(ln, "expected '" + std::string(tag) + " <count>'");
    try {
      std::size_t used = 0;
      const std::string num = line.substr(prefix.size());
      const auto n = std::stoull(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing");
      return n;
    } catch (const std::exception&) {
      throw fail(ln, "bad count in '" + line + "'");
    }
  };

  if (next_line("header") != "folkbangla-bpe v1") throw fail(1, "bad header, expected 'folkbangla-bpe v1'");
  const std::size_t n_pieces = section_count(next_line("#pieces"), "#pieces");
  SubwordModel model;
  for (std::size_t i = 0; i < n_pieces; ++i) {
    const auto& line = next_line("piece row");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail(ln, "piece row needs '<id>\\t<piece>'");
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("id");
    } catch (const std::exception&) {
      throw fail(ln, "bad piece id");
    }
    if (id != i) throw fail(ln, "piece ids must be dense and ordered, expected " + std::to_string(i));
    const std::string piece = line.substr(tab + 1);
    if (piece.empty()) throw fail(ln, "empty piece");
    if (utf8::find_invalid(piece)) throw fail(ln, "piece is not valid UTF-8");
    if (model.find(piece)) throw fail(ln, "duplicate piece '" + piece + "'");
    model.add_piece(piece);
  }
  const SubwordModel specials = SubwordModel::with_specials();
  if (model.size() < SubwordModel::kNumSpecials) throw fail(ln, "model lacks special pieces");
  for (std::size_t i = 0; i < SubwordModel::kNumSpecials; ++i) {
    if (model.id_to_piece[i] != specials.id_to_piece[i]) throw fail(3 + i, "special piece mismatch");
  }
  for (std::size_t id = SubwordModel::kNumSpecials; id < model.size(); ++id) {
    const auto cps = utf8::code_points(model.id_to_piece[id]);
    if (cps.size() == 1) model.alphabet.insert(cps[0].value);
  }
  const std::size_t n_merges = section_count(next_line("#merges"), "#merges");
  for (std::size_t i = 0; i < n_merges; ++i) {
    const auto& line = next_line("merge row");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail(ln, "merge row needs '<left>\\t<right>'");
    std::string left = line.substr(0, tab);
    std::string right = line.substr(tab + 1);
    if (!model.find(left) || !model.find(right)) throw fail(ln, "merge references unknown piece");
    if (!model.find(left + right)) throw fail(ln, "merge output missing from pieces");
    model.merges.emplace_back(std::move(left), std::move(right));
  }
  for (; ln < lines.size(); ++ln) {
    if (!lines[ln].empty()) throw fail(ln + 1, "unexpected trailing content");
  }
  return model;
}

inline void save_model(const SubwordModel& model, const std::filesystem::path& path) {
  write_file(path, serialize(model));
}

inline SubwordModel load_model(const std::filesystem::path& path) {
  return parse_subword_model(read_file(path), path.string());
}

}  // namespace folkbangla
