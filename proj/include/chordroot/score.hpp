#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "chordroot/pitch.hpp"

namespace chordroot {

using Tick = std::int64_t;
using NoteId = std::uint32_t;

/// One sounding note. Tied notes are already merged into a single instance.
struct NoteInstance {
  NoteId id = 0;
  Pitch pitch;
  Tick onset = 0;
  Tick duration = 1;
  std::string part;

  PitchClass pc() const { return pitch.pc; }
  Tick offset() const { return onset + duration; }

  bool operator==(const NoteInstance&) const = default;
};

struct Score {
  Tick ticks_per_quarter = 1;
  std::vector<NoteInstance> notes;
  std::vector<std::string> parts;

  const NoteInstance* find(NoteId id) const {
    auto it = std::find_if(notes.begin(), notes.end(), [id](const NoteInstance& n) { return n.id == id; });
    return it == notes.end() ? nullptr : &*it;
  }

  bool operator==(const Score&) const = default;
};

/// Sorts notes by (onset, part order, pitch, duration) and assigns ids 0..n-1 in that order.
/// Both parsers finish with this so equivalent inputs give identical scores.
inline void normalize(Score& score) {
  auto part_index = [&](const std::string& part) {
    auto it = std::find(score.parts.begin(), score.parts.end(), part);
    if (it == score.parts.end()) {
      score.parts.push_back(part);
      return score.parts.size() - 1;
    }
    return static_cast<std::size_t>(it - score.parts.begin());
  };
  for (const NoteInstance& n : score.notes) part_index(n.part);
  std::stable_sort(score.notes.begin(), score.notes.end(), [&](const NoteInstance& a, const NoteInstance& b) {
    return std::tuple(a.onset, part_index(a.part), a.pitch.key(), a.duration) <
           std::tuple(b.onset, part_index(b.part), b.pitch.key(), b.duration);
  });
  for (std::size_t i = 0; i < score.notes.size(); ++i) score.notes[i].id = static_cast<NoteId>(i);
}

/// Total sounding ticks per part, in part order.
inline std::vector<Tick> sounding_time_per_part(const Score& score) {
  std::vector<Tick> totals(score.parts.size(), 0);
  for (const NoteInstance& n : score.notes) {
    auto it = std::find(score.parts.begin(), score.parts.end(), n.part);
    if (it != score.parts.end()) totals[static_cast<std::size_t>(it - score.parts.begin())] += n.duration;
  }
  return totals;
}

}  // namespace chordroot
