#pragma once

// Vertical segmentation of a score. A new segment starts whenever any note
// starts or stops sounding; segments with at least two distinct pitch classes
// are chords; consecutive chords sharing a held note instance form a group.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "chordroot/score.hpp"

namespace chordroot {

/// A note instance as seen from inside one segment.
struct Member {
  NoteId id = 0;
  Pitch pitch;
  Tick onset = 0;   // of the note, not the segment
  Tick offset = 0;

  PitchClass pc() const { return pitch.pc; }
  bool operator==(const Member&) const = default;
};

struct Segment {
  Tick onset = 0;
  Tick offset = 0;
  std::vector<Member> members;  // ascending id

  PitchClassSet pcs() const {
    PitchClassSet out;
    for (const Member& m : members) out.insert(m.pc());
    return out;
  }
};

struct Chord {
  int index = 0;                 // 1-based position among chords
  std::size_t segment_index = 0;  // position among all segments
  Tick onset = 0;
  Tick offset = 0;
  std::vector<Member> members;
  PitchClassSet pcs;
  Pitch bass;

  PitchClass bass_pc() const { return bass.pc; }
  bool has_member(NoteId id) const {
    return std::any_of(members.begin(), members.end(), [id](const Member& m) { return m.id == id; });
  }
};

/// Half-open range [begin, end) into the piece's chord sequence.
struct ChordGroup {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  std::span<const Chord> of(std::span<const Chord> chords) const { return chords.subspan(begin, size()); }
  bool operator==(const ChordGroup&) const = default;
};

struct GroupOptions {
  /// When true, a single-pitch-class or silent segment between two chords does
  /// not break their group (they still need a shared note instance).
  bool bridge_non_chords = false;
};

inline std::vector<Segment> segment(const Score& score) {
  std::vector<Tick> bounds;
  bounds.reserve(score.notes.size() * 2);
  for (const NoteInstance& n : score.notes) {
    bounds.push_back(n.onset);
    bounds.push_back(n.offset());
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  std::vector<const NoteInstance*> by_onset;
  for (const NoteInstance& n : score.notes) by_onset.push_back(&n);
  std::stable_sort(by_onset.begin(), by_onset.end(),
                   [](const NoteInstance* a, const NoteInstance* b) { return a->onset < b->onset; });

  std::vector<Segment> out;
  std::vector<const NoteInstance*> active;
  std::size_t next = 0;
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    Tick from = bounds[b];
    Tick to = bounds[b + 1];
    std::erase_if(active, [from](const NoteInstance* n) { return n->offset() <= from; });
    while (next < by_onset.size() && by_onset[next]->onset <= from) active.push_back(by_onset[next++]);
    if (active.empty()) continue;

    Segment seg{from, to, {}};
    for (const NoteInstance* n : active) seg.members.push_back({n->id, n->pitch, n->onset, n->offset()});
    std::sort(seg.members.begin(), seg.members.end(), [](const Member& a, const Member& b) { return a.id < b.id; });
    out.push_back(std::move(seg));
  }
  return out;
}

/// Keeps segments with two or more distinct pitch classes, numbered 1..n.
inline std::vector<Chord> chords_of(std::span<const Segment> segments) {
  std::vector<Chord> out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    PitchClassSet pcs = seg.pcs();
    if (pcs.size() < 2) continue;
    Chord c;
    c.index = static_cast<int>(out.size()) + 1;
    c.segment_index = i;
    c.onset = seg.onset;
    c.offset = seg.offset;
    c.members = seg.members;
    c.pcs = pcs;
    c.bass = std::min_element(seg.members.begin(), seg.members.end(), [](const Member& a, const Member& b) {
               return a.pitch < b.pitch;
             })->pitch;
    out.push_back(std::move(c));
  }
  return out;
}

/// True when two chords share at least one note instance (same id, not merely same pitch).
inline bool shares_note(const Chord& a, const Chord& b) {
  return std::any_of(a.members.begin(), a.members.end(), [&](const Member& m) { return b.has_member(m.id); });
}

inline std::vector<ChordGroup> group(std::span<const Chord> chords, GroupOptions options = {}) {
  std::vector<ChordGroup> out;
  for (std::size_t i = 0; i < chords.size(); ++i) {
    bool joins = false;
    if (i > 0) {
      const Chord& prev = chords[i - 1];
      const Chord& cur = chords[i];
      bool adjacent = options.bridge_non_chords || cur.segment_index == prev.segment_index + 1;
      joins = adjacent && shares_note(prev, cur);
    }
    if (joins)
      out.back().end = i + 1;
    else
      out.push_back({i, i + 1});
  }
  return out;
}

/// Segments, chords and groups of one score.
struct Chordification {
  std::vector<Segment> segments;
  std::vector<Chord> chords;
  std::vector<ChordGroup> groups;
};

inline Chordification chordify(const Score& score, GroupOptions options = {}) {
  Chordification c;
  c.segments = segment(score);
  c.chords = chords_of(c.segments);
  c.groups = group(c.chords, options);
  return c;
}

}  // namespace chordroot
