#pragma once

// Per-piece analysis across the selected models, output files (roots txt,
// static HTML, JSON) and scoring against `.correct.txt` annotations.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chordroot/chordify.hpp"
#include "chordroot/context.hpp"
#include "chordroot/error.hpp"
#include "chordroot/roots.hpp"
#include "chordroot/score.hpp"
#include "chordroot/treelearn.hpp"
#include "chordroot/xml.hpp"
#include "json.hpp"

namespace chordroot {

struct AnalysisOptions {
  std::vector<Model> models{kAllModels.begin(), kAllModels.end()};
  std::optional<PitchClass> major_key;  // Parncutt tonality
  IntervalOrder order = IntervalOrder::strict_a();
  GroupOptions grouping;
  std::optional<DecisionTree> auto_tree;  // replaces the built-in generated tree for context-auto
};

struct ChordRecord {
  int index = 0;
  Tick onset = 0;
  Tick offset = 0;
  PitchClassSet pcs;
  Pitch bass;
  std::map<Model, RootResult> results;
};

struct Accuracy {
  std::size_t correct = 0;
  std::size_t scored = 0;

  std::optional<double> percent() const {
    if (scored == 0) return std::nullopt;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(scored);
  }
  /// Two decimals, or "n/a" when nothing was scored.
  std::string formatted() const {
    auto p = percent();
    if (!p) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *p);
    return buf;
  }
  Accuracy& operator+=(const Accuracy& o) {
    correct += o.correct;
    scored += o.scored;
    return *this;
  }
  bool operator==(const Accuracy&) const = default;
};

struct AnalysisReport {
  std::string piece;
  std::vector<Model> models;
  std::vector<ChordRecord> chords;
  std::size_t group_count = 0;
  std::map<Model, Accuracy> accuracy;  // filled by score_report when annotations exist

  std::vector<PitchClassSet> roots_of(Model m) const {
    std::vector<PitchClassSet> out;
    out.reserve(chords.size());
    for (const ChordRecord& c : chords) out.push_back(c.results.at(m).roots);
    return out;
  }
};

inline AnalysisReport analyze_chords(std::string piece, std::span<const Chord> chords,
                                     std::span<const ChordGroup> groups, const AnalysisOptions& options = {}) {
  AnalysisReport report;
  report.piece = std::move(piece);
  report.models = options.models;
  report.group_count = groups.size();
  auto enabled = [&](Model m) { return std::find(options.models.begin(), options.models.end(), m) != options.models.end(); };

  std::vector<RootResult> schmid;
  schmid.reserve(chords.size());
  for (const Chord& c : chords) schmid.push_back(schmid_roots(c));

  for (std::size_t i = 0; i < chords.size(); ++i) {
    const Chord& c = chords[i];
    ChordRecord rec{c.index, c.onset, c.offset, c.pcs, c.bass, {}};
    if (enabled(Model::StackingThirds)) rec.results[Model::StackingThirds] = stacking_thirds_roots(c);
    if (enabled(Model::Terhardt)) rec.results[Model::Terhardt] = terhardt_roots(c);
    if (enabled(Model::Parncutt)) rec.results[Model::Parncutt] = parncutt_roots(c, {20, options.major_key, 5});
    if (enabled(Model::Schmid)) rec.results[Model::Schmid] = schmid[i];
    report.chords.push_back(std::move(rec));
  }

  if (enabled(Model::SchmidIntervalOrder)) {
    auto narrowed = interval_order_disambiguate(schmid, options.order);
    for (std::size_t i = 0; i < chords.size(); ++i) {
      RootResult r = schmid[i];
      r.model = Model::SchmidIntervalOrder;
      r.roots = narrowed[i];
      report.chords[i].results[Model::SchmidIntervalOrder] = r;
    }
  }
  if (enabled(Model::Context)) {
    auto ctx = context_roots(chords, groups, schmid, manual_tree, Model::Context);
    for (std::size_t i = 0; i < chords.size(); ++i) report.chords[i].results[Model::Context] = ctx[i];
  }
  if (enabled(Model::ContextAuto)) {
    PairClassifier tree = generated_tree;
    if (options.auto_tree) tree = *options.auto_tree;
    auto ctx = context_roots(chords, groups, schmid, tree, Model::ContextAuto);
    for (std::size_t i = 0; i < chords.size(); ++i) report.chords[i].results[Model::ContextAuto] = ctx[i];
  }
  return report;
}

inline AnalysisReport analyze_piece(std::string piece, const Score& score, const AnalysisOptions& options = {}) {
  Chordification c = chordify(score, options.grouping);
  return analyze_chords(std::move(piece), c.chords, c.groups, options);
}

/// One line per chord: roots in canonical spelling, " *" appended for cyclic chords.
inline std::string roots_txt(const AnalysisReport& report, Model model) {
  if (std::find(report.models.begin(), report.models.end(), model) == report.models.end())
    throw Error("model " + std::string(model_name(model)) + " was not run for " + report.piece);
  std::string out;
  for (const ChordRecord& c : report.chords) {
    const RootResult& r = c.results.at(model);
    out += spell(r.roots);
    if (r.cyclic) out += " *";
    out += '\n';
  }
  return out;
}

/// Annotated root per chord; nullopt for `?`.
using Annotation = std::vector<std::optional<PitchClass>>;

inline Annotation parse_annotation(std::string_view text) {
  Annotation out;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++number;
    auto words = detail::split_ws(line);
    if (words.empty()) {
      if (pos >= text.size()) break;
      throw ParseError("empty annotation line", number);
    }
    if (words.size() != 1) throw ParseError("expected one root or '?'", number);
    if (words[0] == "?") {
      out.push_back(std::nullopt);
      continue;
    }
    try {
      out.push_back(pc_of_name(parse_note_name(words[0])));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), number);
    }
  }
  return out;
}

/// Membership scoring by default (annotated root among the predicted roots);
/// `strict` requires the prediction to be exactly the annotated root.
inline Accuracy score_roots(std::span<const PitchClassSet> predicted, const Annotation& annotation,
                            std::string_view piece, bool strict = false) {
  if (predicted.size() != annotation.size())
    throw Error(std::string(piece) + ": annotation has " + std::to_string(annotation.size()) + " entries but the piece has " +
                std::to_string(predicted.size()) + " chords");
  Accuracy acc;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!annotation[i]) continue;
    ++acc.scored;
    bool hit = strict ? predicted[i] == PitchClassSet{*annotation[i]} : predicted[i].contains(*annotation[i]);
    if (hit) ++acc.correct;
  }
  return acc;
}

inline void score_report(AnalysisReport& report, const Annotation& annotation, bool strict = false) {
  for (Model m : report.models) report.accuracy[m] = score_roots(report.roots_of(m), annotation, report.piece, strict);
}

inline nlohmann::ordered_json to_json(const AnalysisReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["piece"] = report.piece;
  ordered_json models = ordered_json::array();
  for (Model m : report.models) models.push_back(model_name(m));
  j["models"] = models;
  j["groups"] = report.group_count;
  ordered_json chords = ordered_json::array();
  for (const ChordRecord& c : report.chords) {
    ordered_json row;
    row["index"] = c.index;
    row["onset"] = c.onset;
    row["offset"] = c.offset;
    ordered_json pcs = ordered_json::array();
    for (PitchClass pc : c.pcs) pcs.push_back(spell(pc));
    row["pcs"] = pcs;
    row["bass"] = to_string(c.bass);
    ordered_json results;
    for (Model m : report.models) {
      const RootResult& r = c.results.at(m);
      ordered_json roots = ordered_json::array();
      for (PitchClass pc : r.roots) roots.push_back(spell(pc));
      results[std::string(model_name(m))] = {{"roots", roots}, {"cyclic", r.cyclic}, {"detail", r.detail}};
    }
    row["results"] = results;
    chords.push_back(row);
  }
  j["chords"] = chords;
  if (!report.accuracy.empty()) {
    ordered_json acc;
    for (const auto& [m, a] : report.accuracy) {
      ordered_json entry{{"correct", a.correct}, {"scored", a.scored}};
      if (auto p = a.percent())
        entry["percent"] = *p;
      else
        entry["percent"] = nullptr;
      acc[std::string(model_name(m))] = entry;
    }
    j["accuracy"] = acc;
  }
  return j;
}

inline std::string write_json(const AnalysisReport& report) { return to_json(report).dump(2) + "\n"; }

inline std::string write_html(const AnalysisReport& report) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>" << xml::escape(report.piece) << "</title>\n"
      << "<style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px}"
         "td.cyclic{color:#888}</style>\n"
      << "</head>\n<body>\n<h1>" << xml::escape(report.piece) << "</h1>\n"
      << "<table>\n<tr><th>#</th><th>notes</th><th>bass</th>";
  for (Model m : report.models) out << "<th>" << model_name(m) << "</th>";
  out << "</tr>\n";
  for (const ChordRecord& c : report.chords) {
    out << "<tr><td>" << c.index << "</td><td>" << spell(c.pcs) << "</td><td>" << to_string(c.bass) << "</td>";
    for (Model m : report.models) {
      const RootResult& r = c.results.at(m);
      out << (r.cyclic ? "<td class=\"cyclic\">" : "<td>") << spell(r.roots) << (r.cyclic ? " *" : "") << "</td>";
    }
    out << "</tr>\n";
  }
  if (!report.accuracy.empty()) {
    out << "<tr><th colspan=\"3\">correct</th>";
    for (Model m : report.models) out << "<th>" << report.accuracy.at(m).formatted() << "</th>";
    out << "</tr>\n";
  }
  out << "</table>\n</body>\n</html>\n";
  return out.str();
}

}  // namespace chordroot
