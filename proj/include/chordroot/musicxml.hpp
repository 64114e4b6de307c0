#pragma once

// MusicXML (partwise) reading and numbered-score writing.
//
// Honoured: divisions (LCM across the document), pitch step/alter/octave,
// rests, <chord/>, <tie>, <backup>/<forward>, voices, measures. Grace and cue
// notes, unpitched notes, ornaments and tremolos are skipped with a warning.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "chordroot/chordify.hpp"
#include "chordroot/error.hpp"
#include "chordroot/eventlist.hpp"
#include "chordroot/score.hpp"
#include "chordroot/xml.hpp"
#include "chordroot/zip.hpp"

namespace chordroot {

using Warnings = std::vector<std::string>;

namespace detail {

inline Tick parse_int(std::string_view raw, const char* what) {
  std::string text(raw);
  text.erase(0, text.find_first_not_of(" \t\r\n"));
  text.erase(text.find_last_not_of(" \t\r\n") + 1);
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<Tick>(std::llround(value));
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " value '" + text + "'");
  }
}

inline void collect_divisions(const xml::Element& e, std::vector<Tick>& out) {
  if (e.name == "divisions") {
    Tick d = parse_int(e.text, "divisions");
    if (d <= 0) throw ParseError("divisions must be positive");
    out.push_back(d);
  }
  for (const xml::Element& c : e.children) collect_divisions(c, out);
}

struct PendingTie {
  std::size_t note;  // index into Score::notes
  Tick end;
};

}  // namespace detail

inline Score parse_musicxml(std::string_view bytes, Warnings* warnings = nullptr) {
  auto warn = [&](std::string message) {
    if (warnings != nullptr) warnings->push_back(std::move(message));
  };

  xml::Element root = xml::parse(bytes);
  if (root.name == "score-timewise") throw ParseError("timewise MusicXML is not supported");
  if (root.name != "score-partwise") throw ParseError("not a MusicXML score (root element <" + root.name + ">)");

  std::vector<Tick> all_divisions;
  detail::collect_divisions(root, all_divisions);
  Tick tpq = 1;
  for (Tick d : all_divisions) tpq = std::lcm(tpq, d);

  Score score;
  score.ticks_per_quarter = tpq;
  if (const xml::Element* list = root.child("part-list")) {
    for (const xml::Element& sp : list->children)
      if (sp.name == "score-part") score.parts.emplace_back(sp.attribute("id"));
  }

  std::size_t skipped_grace = 0;
  for (const xml::Element& part : root.children) {
    if (part.name != "part") continue;
    std::string part_id(part.attribute("id"));
    if (std::find(score.parts.begin(), score.parts.end(), part_id) == score.parts.end())
      score.parts.push_back(part_id);

    Tick scale = tpq;  // ticks per local division unit; divisions default to 1
    Tick measure_start = 0;
    std::map<std::tuple<int, std::string>, detail::PendingTie> ties;  // (key, voice)

    for (const xml::Element& measure : part.children) {
      if (measure.name != "measure") continue;
      Tick cursor = measure_start;
      Tick measure_end = measure_start;
      Tick last_onset = measure_start;

      for (const xml::Element& item : measure.children) {
        if (item.name == "attributes") {
          if (item.has_child("divisions")) scale = tpq / detail::parse_int(item.child_text("divisions"), "divisions");
        } else if (item.name == "backup" || item.name == "forward") {
          Tick d = detail::parse_int(item.child_text("duration"), "duration") * scale;
          cursor += item.name == "backup" ? -d : d;
          if (cursor < measure_start) throw ParseError("<backup> moves before the start of measure " +
                                                       std::string(measure.attribute("number", "?")));
        } else if (item.name == "note") {
          if (item.has_child("grace")) {
            ++skipped_grace;
            continue;
          }
          if (item.has_child("cue")) {
            warn("part " + part_id + ": cue note skipped");
            continue;
          }
          Tick d = detail::parse_int(item.child_text("duration"), "duration") * scale;
          Tick onset = cursor;
          if (item.has_child("chord")) {
            onset = last_onset;
          } else {
            last_onset = cursor;
            cursor += d;
          }
          measure_end = std::max({measure_end, cursor, onset + d});

          if (item.has_child("rest")) continue;
          if (item.has_child("unpitched")) {
            warn("part " + part_id + ": unpitched note skipped");
            continue;
          }
          const xml::Element* pitch = item.child("pitch");
          if (pitch == nullptr) throw ParseError("note without pitch or rest in part " + part_id);
          if (d <= 0) throw ParseError("note with non-positive duration in part " + part_id);

          if (const xml::Element* notations = item.child("notations")) {
            if (const xml::Element* ornaments = notations->child("ornaments")) {
              for (const xml::Element& o : ornaments->children)
                warn("part " + part_id + ": ornament <" + o.name + "> ignored");
            }
          }

          std::string step = pitch->child_text("step");
          if (step.size() != 1 || detail::letter_offset(step[0]) < 0) throw ParseError("bad pitch step '" + step + "'");
          Tick alter = pitch->has_child("alter") ? detail::parse_int(pitch->child_text("alter"), "alter") : 0;
          Tick octave = detail::parse_int(pitch->child_text("octave"), "octave");
          Pitch p = Pitch::from_key(static_cast<int>((octave + 1) * 12 + detail::letter_offset(step[0]) + alter));

          bool tie_start = false;
          bool tie_stop = false;
          for (const xml::Element& c : item.children) {
            if (c.name != "tie") continue;
            tie_start |= c.attribute("type") == "start";
            tie_stop |= c.attribute("type") == "stop";
          }
          std::string voice = item.child_text("voice");
          auto key = std::tuple(p.key(), voice);

          if (tie_stop) {
            auto it = ties.find(key);
            if (it != ties.end() && it->second.end == onset) {
              NoteInstance& held = score.notes[it->second.note];
              held.duration += d;
              if (tie_start)
                it->second.end = held.offset();
              else
                ties.erase(it);
              continue;
            }
          }
          score.notes.push_back({0, p, onset, d, part_id});
          if (tie_start) ties[key] = {score.notes.size() - 1, onset + d};
        }
      }
      measure_start = measure_end;
    }
  }
  if (skipped_grace > 0) warn(std::to_string(skipped_grace) + " grace note(s) skipped");
  normalize(score);
  return score;
}

/// Extracts the root MusicXML document of a compressed .mxl container.
inline std::string unpack_mxl(std::string_view archive) {
  if (auto container = zip::read(archive, "META-INF/container.xml")) {
    xml::Element c = xml::parse(*container);
    if (const xml::Element* rootfiles = c.child("rootfiles")) {
      for (const xml::Element& rf : rootfiles->children) {
        if (rf.name != "rootfile") continue;
        std::string path(rf.attribute("full-path"));
        if (auto doc = zip::read(archive, path)) return *doc;
        throw ParseError("mxl rootfile '" + path + "' missing from archive");
      }
    }
  }
  for (const zip::Entry& e : zip::list(archive)) {
    if (e.name.starts_with("META-INF/")) continue;
    if (e.name.ends_with(".xml") || e.name.ends_with(".musicxml")) return zip::extract(archive, e);
  }
  throw ParseError("no MusicXML document inside mxl container");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Reads .mxl, .xml/.musicxml or event-list (.events) files; other extensions are sniffed.
inline Score load_score(const std::filesystem::path& path, Warnings* warnings = nullptr) {
  std::string bytes = read_file(path);
  std::string ext = path.extension().string();
  if (ext == ".events") return parse_eventlist(bytes);
  if (ext == ".mxl" || bytes.starts_with("PK")) return parse_musicxml(unpack_mxl(bytes), warnings);
  std::size_t first = bytes.find_first_not_of(" \t\r\n");
  if (ext == ".xml" || ext == ".musicxml" || (first != std::string::npos && bytes[first] == '<'))
    return parse_musicxml(bytes, warnings);
  return parse_eventlist(bytes);
}

/// The score re-emitted as partwise MusicXML with each note carrying a lyric
/// listing the numbers of the chords it sounds in.
inline std::string write_numbered_musicxml(const Score& score, std::span<const Chord> chords) {
  std::map<NoteId, std::string> lyrics;
  for (const Chord& c : chords) {
    for (const Member& m : c.members) {
      const NoteInstance* n = score.find(m.id);
      if (n == nullptr || n->pitch != m.pitch || n->onset != m.onset)
        throw Error("chord " + std::to_string(c.index) + " does not belong to this score");
      std::string& text = lyrics[m.id];
      if (!text.empty()) text += ' ';
      text += std::to_string(c.index);
    }
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<score-partwise version=\"4.0\">\n"
      << "  <part-list>\n";
  for (const std::string& p : score.parts)
    out << "    <score-part id=\"" << xml::escape(p) << "\"><part-name>" << xml::escape(p) << "</part-name></score-part>\n";
  out << "  </part-list>\n";

  for (const std::string& part : score.parts) {
    // Greedy voice packing: each voice is a non-overlapping run of notes.
    std::vector<std::vector<const NoteInstance*>> voices;
    for (const NoteInstance& n : score.notes) {
      if (n.part != part) continue;
      auto fits = std::find_if(voices.begin(), voices.end(),
                               [&](const auto& v) { return v.back()->offset() <= n.onset; });
      if (fits == voices.end())
        voices.push_back({&n});
      else
        fits->push_back(&n);
    }

    out << "  <part id=\"" << xml::escape(part) << "\">\n"
        << "    <measure number=\"1\">\n"
        << "      <attributes><divisions>" << score.ticks_per_quarter << "</divisions></attributes>\n";
    for (std::size_t v = 0; v < voices.size(); ++v) {
      Tick cursor = 0;
      for (const NoteInstance* n : voices[v]) {
        if (n->onset > cursor) out << "      <forward><duration>" << n->onset - cursor << "</duration></forward>\n";
        NoteName name = name_of_pc(n->pitch.pc);
        out << "      <note><pitch><step>" << name.letter << "</step>";
        if (name.accidental != 0) out << "<alter>" << name.accidental << "</alter>";
        out << "<octave>" << n->pitch.octave << "</octave></pitch>"
            << "<duration>" << n->duration << "</duration><voice>" << v + 1 << "</voice>";
        if (auto it = lyrics.find(n->id); it != lyrics.end())
          out << "<lyric number=\"1\"><syllabic>single</syllabic><text>" << it->second << "</text></lyric>";
        out << "</note>\n";
        cursor = n->offset();
      }
      if (v + 1 < voices.size() && cursor > 0) out << "      <backup><duration>" << cursor << "</duration></backup>\n";
    }
    out << "    </measure>\n"
        << "  </part>\n";
  }
  out << "</score-partwise>\n";
  return out.str();
}

}  // namespace chordroot
