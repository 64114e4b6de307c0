#pragma once

// Plain-text event list, one note per line:
//
//   #! divisions 2        optional; ticks per quarter note (default 1)
//   #! parts P1 P2        optional; declares part order
//   # anything else after '#' is a comment
//   P1 0 4 C4             part onset duration pitch
//
// Onset and duration are in ticks. No tie semantics.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chordroot/error.hpp"
#include "chordroot/score.hpp"

namespace chordroot {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline Tick parse_tick(std::string_view field, const char* what, int line) {
  Tick value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(std::string("bad ") + what + " '" + std::string(field) + "'", line);
  return value;
}

}  // namespace detail

inline Score parse_eventlist(std::string_view text) {
  Score score;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto fields = detail::split_ws(line);
    if (fields.empty()) continue;
    if (fields[0].starts_with("#!")) {
      if (fields.size() >= 2 && fields[1] == "parts") {
        for (std::size_t i = 2; i < fields.size(); ++i) score.parts.emplace_back(fields[i]);
        continue;
      }
      if (fields.size() != 3 || fields[1] != "divisions") throw ParseError("unknown pragma", line_no);
      score.ticks_per_quarter = detail::parse_tick(fields[2], "divisions", line_no);
      if (score.ticks_per_quarter <= 0) throw ParseError("divisions must be positive", line_no);
      continue;
    }
    if (fields[0].starts_with("#")) continue;
    if (fields.size() != 4) throw ParseError("expected 'part onset duration pitch'", line_no);

    NoteInstance note;
    note.part = std::string(fields[0]);
    note.onset = detail::parse_tick(fields[1], "onset", line_no);
    note.duration = detail::parse_tick(fields[2], "duration", line_no);
    if (note.onset < 0) throw ParseError("negative onset", line_no);
    if (note.duration <= 0) throw ParseError("zero or negative duration", line_no);
    try {
      note.pitch = parse_pitch(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    score.notes.push_back(std::move(note));
  }
  normalize(score);
  return score;
}

inline std::string write_eventlist(const Score& score) {
  std::ostringstream out;
  out << "#! divisions " << score.ticks_per_quarter << '\n';
  if (!score.parts.empty()) {
    out << "#! parts";
    for (const std::string& p : score.parts) out << ' ' << p;
    out << '\n';
  }
  for (const NoteInstance& n : score.notes)
    out << n.part << ' ' << n.onset << ' ' << n.duration << ' ' << to_string(n.pitch) << '\n';
  return out.str();
}

}  // namespace chordroot
