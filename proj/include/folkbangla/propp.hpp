#pragma once

// Folk-character identification following Propp's morphology: lexicon-driven
// mention detection, stem-based mention linking, narrative-function tagging
// and role assignment by the linear score  a = b*x + c*y,
// where x is lexical evidence and y contextual (function co-occurrence)
// evidence for a role.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"

namespace folkbangla::propp {

enum class Function : int {
  Absentation = 1,
  Interdiction,
  Violation,
  Reconnaissance,
  Delivery,
  Trickery,
  Complicity,
  VillainyLack,
  Mediation,
  Counteraction,
  Departure,
  FirstDonorFunction,
  HeroReaction,
  ReceiptOfAgent,
  Guidance,
  Struggle,
  Branding,
  Victory,
  Liquidation,
  Return,
  Pursuit,
  Rescue,
  UnrecognizedArrival,
  UnfoundedClaims,
  DifficultTask,
  Solution,
  Recognition,
  Exposure,
  Transfiguration,
  Punishment,
  Wedding,
};

inline constexpr std::size_t kNumFunctions = 31;

inline constexpr std::array<std::string_view, kNumFunctions> kFunctionNames = {
    "Absentation",   "Interdiction",       "Violation",      "Reconnaissance",      "Delivery",
    "Trickery",      "Complicity",         "Villainy/Lack",  "Mediation",           "Counteraction",
    "Departure",     "FirstDonorFunction", "HeroReaction",   "ReceiptOfAgent",      "Guidance",
    "Struggle",      "Branding",           "Victory",        "Liquidation",         "Return",
    "Pursuit",       "Rescue",             "UnrecognizedArrival", "UnfoundedClaims", "DifficultTask",
    "Solution",      "Recognition",        "Exposure",       "Transfiguration",     "Punishment",
    "Wedding",
};

/// Canonical 1-based index.
inline constexpr int index_of(Function f) { return static_cast<int>(f); }
inline constexpr std::size_t slot(Function f) { return static_cast<std::size_t>(f) - 1; }
inline constexpr Function function_at(std::size_t slot) { return static_cast<Function>(slot + 1); }

inline std::string_view name_of(Function f) { return kFunctionNames[slot(f)]; }

inline std::optional<Function> parse_function(std::string_view name) {
  for (std::size_t i = 0; i < kNumFunctions; ++i) {
    if (kFunctionNames[i] == name) return function_at(i);
  }
  if (name == "Villainy" || name == "Lack" || name == "VillainyLack") return Function::VillainyLack;
  return std::nullopt;
}

enum class Role : int { Hero = 1, Villain, Donor, Helper, SoughtForPerson, Dispatcher, FalseHero };

inline constexpr std::size_t kNumRoles = 7;

inline constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "Hero", "Villain", "Donor", "Helper", "SoughtForPerson", "Dispatcher", "FalseHero",
};

inline constexpr int index_of(Role r) { return static_cast<int>(r); }
inline constexpr std::size_t slot(Role r) { return static_cast<std::size_t>(r) - 1; }
inline constexpr Role role_at(std::size_t slot) { return static_cast<Role>(slot + 1); }
inline std::string_view name_of(Role r) { return kRoleNames[slot(r)]; }

inline std::optional<Role> parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kNumRoles; ++i) {
    if (kRoleNames[i] == name) return role_at(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Stemming

/// Case/possessive suffixes, longest first.
inline const std::vector<std::string>& mention_suffixes() {
  static const std::vector<std::string> kSuffixes = {"েরা", "রা", "কে", "ের", "র"};
  return kSuffixes;
}

/// Mention suffixes plus locative endings, used to match function triggers.
inline const std::vector<std::string>& trigger_suffixes() {
  static const std::vector<std::string> kSuffixes = {"েরা", "রা", "কে", "ের", "তে", "র", "ে"};
  return kSuffixes;
}

/// Lexicon-independent stem: strips the first (longest) matching suffix as
/// long as at least two code points remain.
inline std::string generic_stem(std::string_view word) {
  for (const auto& suffix : mention_suffixes()) {
    if (word.size() > suffix.size() && word.ends_with(suffix)) {
      auto rest = word.substr(0, word.size() - suffix.size());
      if (utf8::length(rest) >= 2) return std::string(rest);
    }
  }
  return std::string(word);
}

/// Whether two character names refer to the same figure after suffix stripping.
inline bool stem_equal(std::string_view a, std::string_view b) {
  return a == b || generic_stem(a) == generic_stem(b);
}

// ---------------------------------------------------------------------------
// Data files

namespace detail {

struct TsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

/// Splits TSV content into normalized fields; skips blank and '#' lines.
inline std::vector<TsvRow> read_tsv(std::string_view content, const std::string& source) {
  if (auto bad = utf8::find_invalid(content)) throw DecodeError("invalid UTF-8 in " + source, *bad);
  std::vector<TsvRow> rows;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    TsvRow row{ln, {}};
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      std::string field = normalize(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      while (!field.empty() && field.back() == ' ') field.pop_back();
      while (!field.empty() && field.front() == ' ') field.erase(field.begin());
      row.fields.push_back(std::move(field));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double parse_real(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, line, "bad number '" + s + "'");
  }
}

}  // namespace detail

using RolePriors = std::array<double, kNumRoles>;

/// Bengali role nouns with a prior weight per role.
struct CharacterLexicon {
  std::map<std::string, RolePriors> entries;

  bool contains(std::string_view w) const { return entries.contains(std::string(w)); }

  RolePriors priors(std::string_view w) const {
    auto it = entries.find(std::string(w));
    return it == entries.end() ? RolePriors{} : it->second;
  }

  void set(const std::string& word, Role role, double prior) {
    if (prior < 0.0 || prior > 1.0) throw ValidationError("lexicon prior out of [0,1] for " + word);
    entries[word][slot(role)] = prior;
  }

  /// Surface form, or surface minus a case/possessive suffix, found in the lexicon.
  std::optional<std::string> match(std::string_view surface) const {
    if (contains(surface)) return std::string(surface);
    for (const auto& suffix : mention_suffixes()) {
      if (surface.size() > suffix.size() && surface.ends_with(suffix)) {
        auto rest = surface.substr(0, surface.size() - suffix.size());
        if (contains(rest)) return std::string(rest);
      }
    }
    return std::nullopt;
  }

  /// TSV `word<TAB>role<TAB>prior`; a word may appear once per role.
  static CharacterLexicon parse(std::string_view content, const std::string& source = "<lexicon>") {
    CharacterLexicon lex;
    for (const auto& row : detail::read_tsv(content, source)) {
      if (row.fields.size() != 3) throw ParseError(source, row.line, "expected 'word<TAB>role<TAB>prior'");
      const auto role = parse_role(row.fields[1]);
      if (!role) throw ParseError(source, row.line, "unknown role '" + row.fields[1] + "'");
      if (row.fields[0].empty()) throw ParseError(source, row.line, "empty word");
      const double prior = detail::parse_real(row.fields[2], source, row.line);
      if (prior < 0.0 || prior > 1.0) throw ParseError(source, row.line, "prior must lie in [0,1]");
      lex.entries[row.fields[0]][slot(*role)] = prior;
    }
    return lex;
  }

  static CharacterLexicon load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }
};

/// Weights linking each role to evidence from each narrative function.
struct RoleMatrix {
  std::array<std::array<double, kNumFunctions>, kNumRoles> weights{};

  double at(Role r, Function f) const { return weights[slot(r)][slot(f)]; }
  double& at(Role r, Function f) { return weights[slot(r)][slot(f)]; }

  void validate() const {
    for (std::size_t r = 0; r < kNumRoles; ++r) {
      bool any = false;
      for (double w : weights[r]) {
        if (!std::isfinite(w)) throw ValidationError("role matrix contains a non-finite weight");
        any = any || w != 0.0;
      }
      if (!any) throw ValidationError("role " + std::string(kRoleNames[r]) + " has no nonzero weight");
    }
  }

  /// TSV: header `role<TAB>` + 31 function names, then one row per role.
  static RoleMatrix parse(std::string_view content, const std::string& source = "<matrix>") {
    const auto rows = detail::read_tsv(content, source);
    if (rows.empty()) throw ParseError(source, 1, "empty role matrix");
    const auto& header = rows.front();
    if (header.fields.size() != kNumFunctions + 1) {
      throw ParseError(source, header.line, "header needs a role column and " + std::to_string(kNumFunctions) +
                                                " function names");
    }
    std::array<std::size_t, kNumFunctions> column_slot{};
    std::set<std::size_t> seen_functions;
    for (std::size_t c = 0; c < kNumFunctions; ++c) {
      const auto f = parse_function(header.fields[c + 1]);
      if (!f) throw ParseError(source, header.line, "unknown function '" + header.fields[c + 1] + "'");
      if (!seen_functions.insert(slot(*f)).second) {
        throw ParseError(source, header.line, "duplicate function '" + header.fields[c + 1] + "'");
      }
      column_slot[c] = slot(*f);
    }
    RoleMatrix m;
    std::set<std::size_t> seen_roles;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.fields.size() != kNumFunctions + 1) {
        throw ParseError(source, row.line, "expected role name and " + std::to_string(kNumFunctions) + " weights");
      }
      const auto role = parse_role(row.fields[0]);
      if (!role) throw ParseError(source, row.line, "unknown role '" + row.fields[0] + "'");
      if (!seen_roles.insert(slot(*role)).second) throw ParseError(source, row.line, "duplicate role row");
      for (std::size_t c = 0; c < kNumFunctions; ++c) {
        m.weights[slot(*role)][column_slot[c]] = detail::parse_real(row.fields[c + 1], source, row.line);
      }
    }
    if (seen_roles.size() != kNumRoles) {
      throw ParseError(source, rows.back().line, "matrix must have exactly " + std::to_string(kNumRoles) + " role rows");
    }
    try {
      m.validate();
    } catch (const ValidationError& e) {
      throw ParseError(source, rows.back().line, e.what());
    }
    return m;
  }

  static RoleMatrix load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }
};

/// Bengali cue words mapped to the narrative functions they signal.
struct TriggerLexicon {
  std::map<std::string, std::vector<Function>> triggers;

  void add(const std::string& word, Function f) {
    auto& fs = triggers[word];
    if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(f);
  }

  /// Functions signalled by a token, matching the surface or its
  /// suffix-stripped forms.
  std::vector<Function> match(std::string_view token) const {
    std::vector<Function> out;
    auto collect = [&](std::string_view form) {
      auto it = triggers.find(std::string(form));
      if (it == triggers.end()) return;
      for (auto f : it->second) {
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
      }
    };
    collect(token);
    for (const auto& suffix : trigger_suffixes()) {
      if (token.size() > suffix.size() && token.ends_with(suffix)) collect(token.substr(0, token.size() - suffix.size()));
    }
    return out;
  }

  /// TSV `trigger<TAB>function`.
  static TriggerLexicon parse(std::string_view content, const std::string& source = "<triggers>") {
    TriggerLexicon lex;
    for (const auto& row : detail::read_tsv(content, source)) {
      if (row.fields.size() != 2) throw ParseError(source, row.line, "expected 'trigger<TAB>function'");
      if (row.fields[0].empty()) throw ParseError(source, row.line, "empty trigger");
      const auto f = parse_function(row.fields[1]);
      if (!f) throw ParseError(source, row.line, "unknown function '" + row.fields[1] + "'");
      lex.add(row.fields[0], *f);
    }
    return lex;
  }

  static TriggerLexicon load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }
};

struct ScoreWeights {
  double b = 1.0;
  double c = 1.0;

  void validate() const {
    if (!(b > 0.0) || !(c > 0.0)) throw ConfigError("score weights b and c must be positive");
  }
};

struct RoleEvidence {
  double x = 0.0;  ///< lexical evidence, [0,1]
  double y = 0.0;  ///< contextual evidence, [0,1]
};

/// a = b*x + c*y
inline double score_role(const RoleEvidence& e, const ScoreWeights& w) { return w.b * e.x + w.c * e.y; }

// ---------------------------------------------------------------------------
// Documents, mentions, entities

/// A document split into sentences with punct-tokenized tokens per sentence.
struct AnalyzedDocument {
  std::string id;
  std::string text;
  std::vector<SentenceSpan> sentences;
  std::vector<std::vector<Token>> tokens;  ///< per sentence

  std::size_t size() const { return sentences.size(); }
};

inline AnalyzedDocument analyze(const Document& doc) {
  AnalyzedDocument a;
  a.id = doc.id;
  a.text = doc.normalized_text;
  a.sentences = segment_sentences(a.text);
  const auto all = punct_tokenize(a.text);
  std::size_t t = 0;
  for (const auto& s : a.sentences) {
    std::vector<Token> in_sentence;
    for (; t < all.size() && all[t].start < s.end; ++t) {
      if (all[t].start >= s.start) in_sentence.push_back(all[t]);
    }
    a.tokens.push_back(std::move(in_sentence));
  }
  return a;
}

struct Mention {
  std::string surface;
  std::string stem;
  std::size_t sentence_index = 0;
  std::size_t token_begin = 0;  ///< index into the sentence's token list
  std::size_t token_end = 0;    ///< exclusive

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct CharacterEntity {
  std::string canonical;
  std::string stem;
  std::vector<Mention> mentions;

  std::set<std::size_t> sentence_indices() const {
    std::set<std::size_t> out;
    for (const auto& m : mentions) out.insert(m.sentence_index);
    return out;
  }
};

struct MentionOptions {
  /// Also detect repeated non-lexicon names (rule b).
  bool proper_names = true;
  std::size_t min_name_occurrences = 3;
};

namespace detail {

/// Endings of inflected verb forms, which never start a proper-name candidate.
inline bool looks_verbal(std::string_view w) {
  static const std::vector<std::string> kEndings = {"লেন", "লাম", "লো", "ছেন", "ছে", "ছিল", "বেন", "বে", "তে", "ে"};
  return std::any_of(kEndings.begin(), kEndings.end(), [&](const std::string& e) { return w.ends_with(e); });
}

inline bool all_letters(std::string_view w) {
  for (const auto& cp : utf8::code_points(w)) {
    if (!utf8::is_alphabetic(cp.value)) return false;
  }
  return true;
}

}  // namespace detail

/// Mention heads in document order. A Word token is a head when
///  (a) it, or its form without a case/possessive suffix, is a lexicon entry; or
///  (b) it is a proper-name candidate: its stem occurs at least three times,
///      at least once away from sentence start, and it is neither a stopword,
///      a function trigger, nor a verb-like stem.
inline std::vector<Mention> detect_mentions(const AnalyzedDocument& doc, const CharacterLexicon& lexicon,
                                            const StopwordList& stopwords = {}, const TriggerLexicon& triggers = {},
                                            const MentionOptions& options = {}) {
  struct NameStats {
    std::size_t count = 0;
    bool non_initial = false;
  };
  std::map<std::string, NameStats> names;
  if (options.proper_names) {
    for (std::size_t s = 0; s < doc.size(); ++s) {
      bool first_word = true;
      for (const auto& tok : doc.tokens[s]) {
        if (tok.kind != TokenKind::Word) continue;
        const bool initial = first_word;
        first_word = false;
        if (lexicon.match(tok.surface)) continue;
        if (stopwords.contains(tok.surface) || !triggers.match(tok.surface).empty()) continue;
        const auto stem = generic_stem(tok.surface);
        if (detail::looks_verbal(stem) || !detail::all_letters(tok.surface)) continue;
        if (stopwords.contains(stem) || utf8::length(stem) < 2) continue;
        auto& st = names[stem];
        ++st.count;
        st.non_initial = st.non_initial || !initial;
      }
    }
  }

  std::vector<Mention> out;
  for (std::size_t s = 0; s < doc.size(); ++s) {
    const auto& toks = doc.tokens[s];
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const auto& tok = toks[i];
      if (tok.kind != TokenKind::Word) continue;
      if (auto stem = lexicon.match(tok.surface)) {
        out.push_back({tok.surface, *stem, s, i, i + 1});
        continue;
      }
      if (!options.proper_names) continue;
      auto it = names.find(generic_stem(tok.surface));
      if (it == names.end() || it->second.count < options.min_name_occurrences || !it->second.non_initial) continue;
      if (stopwords.contains(tok.surface) || !triggers.match(tok.surface).empty()) continue;
      if (detail::looks_verbal(it->first) || !detail::all_letters(tok.surface)) continue;
      out.push_back({tok.surface, it->first, s, i, i + 1});
    }
  }
  return out;
}

/// Groups mentions by stem. Canonical name is the most frequent surface,
/// ties to the earliest. Entities are ordered by first mention.
inline std::vector<CharacterEntity> link_mentions(const std::vector<Mention>& mentions) {
  std::vector<CharacterEntity> entities;
  std::unordered_map<std::string, std::size_t> by_stem;
  for (const auto& m : mentions) {
    auto [it, inserted] = by_stem.try_emplace(m.stem, entities.size());
    if (inserted) entities.push_back({{}, m.stem, {}});
    entities[it->second].mentions.push_back(m);
  }
  for (auto& e : entities) {
    std::map<std::string, std::size_t> freq;
    for (const auto& m : e.mentions) ++freq[m.surface];
    std::size_t best = 0;
    for (const auto& m : e.mentions) {  // document order gives earliest-first ties
      if (freq[m.surface] > best) {
        best = freq[m.surface];
        e.canonical = m.surface;
      }
    }
  }
  return entities;
}

struct FunctionTag {
  std::size_t sentence_index = 0;
  Function function = Function::Absentation;

  friend bool operator==(const FunctionTag&, const FunctionTag&) = default;
};

/// Every function whose trigger matches a token of a sentence, ordered by
/// sentence then function index, without duplicates.
inline std::vector<FunctionTag> tag_functions(const AnalyzedDocument& doc, const TriggerLexicon& triggers) {
  std::vector<FunctionTag> tags;
  for (std::size_t s = 0; s < doc.size(); ++s) {
    std::set<int> found;
    for (const auto& tok : doc.tokens[s]) {
      if (tok.kind != TokenKind::Word) continue;
      for (auto f : triggers.match(tok.surface)) found.insert(index_of(f));
    }
    for (int f : found) tags.push_back({s, static_cast<Function>(f)});
  }
  return tags;
}

/// x = lexicon prior of the entity's stem for `role`; y = mean matrix weight
/// of `role` over all function tags in sentences mentioning the entity,
/// clamped to [0,1] (0 when none of them is tagged).
inline RoleEvidence role_evidence(const CharacterEntity& entity, Role role, const std::vector<FunctionTag>& tags,
                                  const RoleMatrix& matrix, const CharacterLexicon& lexicon) {
  RoleEvidence e;
  e.x = std::clamp(lexicon.priors(entity.stem)[slot(role)], 0.0, 1.0);
  const auto sentences = entity.sentence_indices();
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : tags) {
    if (!sentences.contains(t.sentence_index)) continue;
    sum += matrix.at(role, t.function);
    ++n;
  }
  e.y = n == 0 ? 0.0 : std::clamp(sum / static_cast<double>(n), 0.0, 1.0);
  return e;
}

struct RoleAssignment {
  CharacterEntity entity;
  Role role = Role::Hero;
  double score = 0.0;
  std::array<double, kNumRoles> scores{};
};

/// Argmax role per entity; ties go to the lower role index.
inline std::vector<RoleAssignment> assign_roles(const std::vector<CharacterEntity>& entities,
                                                const std::vector<FunctionTag>& tags, const RoleMatrix& matrix,
                                                const CharacterLexicon& lexicon, const ScoreWeights& weights = {}) {
  weights.validate();
  std::vector<RoleAssignment> out;
  for (const auto& entity : entities) {
    RoleAssignment a;
    a.entity = entity;
    for (std::size_t r = 0; r < kNumRoles; ++r) {
      a.scores[r] = score_role(role_evidence(entity, role_at(r), tags, matrix, lexicon), weights);
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < kNumRoles; ++r) {
      if (a.scores[r] > a.scores[best]) best = r;
    }
    a.role = role_at(best);
    a.score = a.scores[best];
    out.push_back(std::move(a));
  }
  return out;
}

/// Lexicon, matrix, triggers and stopwords used by the character pipeline.
struct Resources {
  CharacterLexicon lexicon;
  RoleMatrix matrix;
  TriggerLexicon triggers;
  StopwordList stopwords;

  static Resources load(const std::filesystem::path& lexicon, const std::filesystem::path& matrix,
                        const std::filesystem::path& triggers, const std::filesystem::path& stopwords) {
    return {CharacterLexicon::load(lexicon), RoleMatrix::load(matrix), TriggerLexicon::load(triggers),
            StopwordList::load(stopwords)};
  }

  static Resources bundled() {
    const auto dir = default_data_dir();
    return load(dir / "lexicon.tsv", dir / "role_matrix.tsv", dir / "triggers.tsv", dir / "stopwords_bn.txt");
  }
};

/// Detect, link, tag and assign in one pass.
inline std::vector<RoleAssignment> identify_characters(const Document& doc, const Resources& res,
                                                       const ScoreWeights& weights = {},
                                                       const MentionOptions& options = {}) {
  const auto analyzed = analyze(doc);
  const auto mentions = detect_mentions(analyzed, res.lexicon, res.stopwords, res.triggers, options);
  const auto entities = link_mentions(mentions);
  const auto tags = tag_functions(analyzed, res.triggers);
  return assign_roles(entities, tags, res.matrix, res.lexicon, weights);
}

}  // namespace folkbangla::propp
