#pragma once

// Precision / recall / F1 for character-role predictions, and rendering of
// model comparison tables.

#include <array>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "folkbangla/corpus.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/propp.hpp"

namespace folkbangla::eval {

using propp::Role;

/// One (document, character, role) triple; used for gold and predictions alike.
struct Annotation {
  std::string document;
  std::string canonical;
  Role role = Role::Hero;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// TSV `document<TAB>canonical<TAB>role`, '#' comments allowed.
inline std::vector<Annotation> parse_annotations(std::string_view content, const std::string& source = "<tsv>") {
  std::vector<Annotation> out;
  for (const auto& row : propp::detail::read_tsv(content, source)) {
    if (row.fields.size() != 3) throw ParseError(source, row.line, "expected 'document<TAB>canonical<TAB>role'");
    const auto role = propp::parse_role(row.fields[2]);
    if (!role) throw ParseError(source, row.line, "unknown role '" + row.fields[2] + "'");
    if (row.fields[1].empty()) throw ParseError(source, row.line, "empty canonical name");
    out.push_back({row.fields[0], row.fields[1], *role});
  }
  return out;
}

/// Reads predictions produced by any system, for scoring against the same gold.
inline std::vector<Annotation> ingest_external_predictions(const std::filesystem::path& path) {
  return parse_annotations(read_file(path), path.string());
}

/// Gold file; (document, canonical) pairs must be unique up to stem.
inline std::vector<Annotation> load_gold(const std::filesystem::path& path) {
  auto gold = parse_annotations(read_file(path), path.string());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& g : gold) {
    if (!seen.insert({g.document, propp::generic_stem(g.canonical)}).second) {
      throw ValidationError("duplicate gold entry for '" + g.canonical + "' in document '" + g.document + "'");
    }
  }
  return gold;
}

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

struct MatchResult {
  Counts total;
  std::array<Counts, propp::kNumRoles> per_role{};
};

enum class MatchMode { EntityAndRole, EntityOnly };

/// A prediction is a true positive when an unmatched gold item of the same
/// document has a stem-equal canonical name (and, in the default mode, the
/// same role). Per-role counts use the predicted role for TP/FP and the gold
/// role for FN.
inline MatchResult match(const std::vector<Annotation>& pred, const std::vector<Annotation>& gold,
                         MatchMode mode = MatchMode::EntityAndRole) {
  {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : pred) {
      if (!seen.insert({p.document, propp::generic_stem(p.canonical)}).second) {
        throw ValidationError("duplicate predicted character '" + p.canonical + "' in document '" + p.document + "'");
      }
    }
  }
  MatchResult r;
  std::vector<bool> used(gold.size(), false);
  for (const auto& p : pred) {
    bool hit = false;
    for (std::size_t g = 0; g < gold.size() && !hit; ++g) {
      if (used[g] || gold[g].document != p.document || !propp::stem_equal(gold[g].canonical, p.canonical)) continue;
      if (mode == MatchMode::EntityAndRole && gold[g].role != p.role) continue;
      used[g] = true;
      hit = true;
    }
    auto& role_counts = r.per_role[propp::slot(p.role)];
    if (hit) {
      ++r.total.tp;
      ++role_counts.tp;
    } else {
      ++r.total.fp;
      ++role_counts.fp;
    }
  }
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (used[g]) continue;
    ++r.total.fn;
    ++r.per_role[propp::slot(gold[g].role)].fn;
  }
  return r;
}

struct EvalReport {
  std::string model;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Counts counts;
  std::array<Counts, propp::kNumRoles> per_role{};
};

/// P = TP/(TP+FP), R = TP/(TP+FN), F1 their harmonic mean; 0 on empty denominators.
inline EvalReport metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::string model = {}) {
  EvalReport r;
  r.model = std::move(model);
  r.counts = {tp, fp, fn};
  r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

inline EvalReport metrics(const MatchResult& m, std::string model = {}) {
  auto r = metrics(m.total.tp, m.total.fp, m.total.fn, std::move(model));
  r.per_role = m.per_role;
  return r;
}

inline EvalReport evaluate(const std::vector<Annotation>& pred, const std::vector<Annotation>& gold,
                           std::string model = {}, MatchMode mode = MatchMode::EntityAndRole) {
  return metrics(match(pred, gold, mode), std::move(model));
}

namespace detail {

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

}  // namespace detail

/// Plain-text comparison table: `Model Name Precision F1 Recall`, one row
/// per report in input order, values as percentages with two decimals.
inline std::string render_table(const std::vector<EvalReport>& reports) {
  std::string out = "Model Name Precision F1 Recall\n";
  for (const auto& r : reports) {
    out += r.model.empty() ? std::string("unnamed") : r.model;
    out += ' ' + detail::percent(r.precision) + ' ' + detail::percent(r.f1) + ' ' + detail::percent(r.recall) + '\n';
  }
  return out;
}

/// Machine-readable form: one summary row per model plus per-role counts.
inline std::string render_tsv(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "model\trole\tprecision\tf1\trecall\ttp\tfp\tfn\n";
  char buf[128];
  for (const auto& r : reports) {
    const std::string name = r.model.empty() ? "unnamed" : r.model;
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", r.precision, r.f1, r.recall);
    out << name << "\tALL\t" << buf << '\t' << r.counts.tp << '\t' << r.counts.fp << '\t' << r.counts.fn << '\n';
    for (std::size_t i = 0; i < propp::kNumRoles; ++i) {
      const auto& c = r.per_role[i];
      if (c.tp + c.fp + c.fn == 0) continue;
      const auto role_report = metrics(c.tp, c.fp, c.fn);
      std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", role_report.precision, role_report.f1, role_report.recall);
      out << name << '\t' << propp::kRoleNames[i] << '\t' << buf << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn
          << '\n';
    }
  }
  return out.str();
}

}  // namespace folkbangla::eval
