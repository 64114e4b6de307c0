#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chordroot/error.hpp"

namespace chordroot {

/// Pitch modulo octave, C = 0. Always held reduced to 0..11.
class PitchClass {
 public:
  constexpr PitchClass() = default;
  constexpr explicit PitchClass(int value) : value_(static_cast<std::uint8_t>(((value % 12) + 12) % 12)) {}

  constexpr int value() const noexcept { return value_; }

  /// Transpose up by `semitones` (may be negative).
  constexpr PitchClass operator+(int semitones) const noexcept { return PitchClass(value_ + semitones); }
  constexpr PitchClass operator-(int semitones) const noexcept { return PitchClass(value_ - semitones); }

  /// Ascending interval from `other` up to this pitch class, in 0..11.
  constexpr int operator-(PitchClass other) const noexcept { return ((value_ - other.value_) % 12 + 12) % 12; }

  constexpr auto operator<=>(const PitchClass&) const = default;

 private:
  std::uint8_t value_ = 0;
};

/// A set of distinct pitch classes backed by a 12-bit mask.
class PitchClassSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = PitchClass;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = PitchClass;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint16_t rest) : rest_(rest) {}
    constexpr PitchClass operator*() const { return PitchClass(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= static_cast<std::uint16_t>(rest_ - 1);
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint16_t rest_ = 0;
  };

  constexpr PitchClassSet() = default;
  constexpr PitchClassSet(std::initializer_list<PitchClass> pcs) {
    for (PitchClass pc : pcs) insert(pc);
  }
  static constexpr PitchClassSet from_mask(std::uint16_t mask) {
    PitchClassSet s;
    s.mask_ = mask & kFull;
    return s;
  }
  static constexpr PitchClassSet all() { return from_mask(kFull); }

  constexpr void insert(PitchClass pc) { mask_ |= bit(pc); }
  constexpr void erase(PitchClass pc) { mask_ &= static_cast<std::uint16_t>(~bit(pc)); }
  constexpr bool contains(PitchClass pc) const { return (mask_ & bit(pc)) != 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint16_t mask() const { return mask_; }

  constexpr bool is_subset_of(PitchClassSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool intersects(PitchClassSet other) const { return (mask_ & other.mask_) != 0; }
  constexpr PitchClassSet operator-(PitchClassSet other) const {
    return from_mask(static_cast<std::uint16_t>(mask_ & ~other.mask_));
  }
  constexpr PitchClassSet operator|(PitchClassSet other) const { return from_mask(mask_ | other.mask_); }
  constexpr PitchClassSet operator&(PitchClassSet other) const { return from_mask(mask_ & other.mask_); }

  /// Every member moved up by `semitones`.
  constexpr PitchClassSet transposed(int semitones) const {
    PitchClassSet out;
    for (PitchClass pc : *this) out.insert(pc + semitones);
    return out;
  }

  constexpr PitchClass front() const { return PitchClass(std::countr_zero(mask_)); }

  constexpr iterator begin() const { return iterator(mask_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<PitchClass> to_vector() const { return {begin(), end()}; }

  constexpr bool operator==(const PitchClassSet&) const = default;

 private:
  static constexpr std::uint16_t kFull = 0x0FFF;
  static constexpr std::uint16_t bit(PitchClass pc) { return static_cast<std::uint16_t>(1u << pc.value()); }
  std::uint16_t mask_ = 0;
};

/// Letter name plus a single optional sharp or flat.
struct NoteName {
  char letter = 'C';   // 'A'..'G'
  int accidental = 0;  // -1 flat, 0 natural, +1 sharp

  bool operator==(const NoteName&) const = default;
};

namespace detail {

constexpr int letter_offset(char letter) {
  switch (letter) {
    case 'C': return 0;
    case 'D': return 2;
    case 'E': return 4;
    case 'F': return 5;
    case 'G': return 7;
    case 'A': return 9;
    case 'B': return 11;
    default: return -1;
  }
}

// Consumes an accidental token at the front of `s`; returns +1/-1 or 0 when none.
inline int take_accidental(std::string_view& s) {
  static constexpr std::pair<std::string_view, int> kTokens[] = {
      {"♯", +1}, {"♭", -1}, {"#", +1}, {"b", -1}, {"s", +1}};
  for (const auto& [token, delta] : kTokens) {
    if (s.starts_with(token)) {
      s.remove_prefix(token.size());
      return delta;
    }
  }
  return 0;
}

}  // namespace detail

constexpr PitchClass pc_of_name(NoteName name) { return PitchClass(detail::letter_offset(name.letter) + name.accidental); }

/// Canonical sharp-preferring spelling.
constexpr NoteName name_of_pc(PitchClass pc) {
  constexpr std::array<NoteName, 12> kNames{{{'C', 0},
                                             {'C', 1},
                                             {'D', 0},
                                             {'D', 1},
                                             {'E', 0},
                                             {'F', 0},
                                             {'F', 1},
                                             {'G', 0},
                                             {'G', 1},
                                             {'A', 0},
                                             {'A', 1},
                                             {'B', 0}}};
  return kNames[static_cast<std::size_t>(pc.value())];
}

/// ASCII rendering: "C", "C#", "Bb".
inline std::string to_string(NoteName name) {
  std::string out(1, name.letter);
  if (name.accidental > 0) out += '#';
  if (name.accidental < 0) out += 'b';
  return out;
}

inline std::string spell(PitchClass pc) { return to_string(name_of_pc(pc)); }

/// Space-separated canonical spellings in ascending pitch-class order.
inline std::string spell(PitchClassSet pcs) {
  std::string out;
  for (PitchClass pc : pcs) {
    if (!out.empty()) out += ' ';
    out += spell(pc);
  }
  return out;
}

/// Parses a note name with no octave ("C", "F#", "Bb", "B♯"). Double accidentals are rejected.
inline NoteName parse_note_name(std::string_view text) {
  std::string_view rest = text;
  if (rest.empty()) throw ParseError("empty note name");
  char letter = rest.front();
  if (letter >= 'a' && letter <= 'g') letter = static_cast<char>(letter - 'a' + 'A');
  if (detail::letter_offset(letter) < 0) throw ParseError("invalid note letter in '" + std::string(text) + "'");
  rest.remove_prefix(1);
  int accidental = detail::take_accidental(rest);
  if (accidental != 0 && detail::take_accidental(rest) != 0)
    throw ParseError("double accidentals are not supported: '" + std::string(text) + "'");
  if (!rest.empty()) throw ParseError("trailing characters in note name '" + std::string(text) + "'");
  return {letter, accidental};
}

/// A sounding pitch: pitch class plus scientific octave (C4 = middle C).
struct Pitch {
  PitchClass pc;
  int octave = 4;

  /// MIDI-style key number, C4 = 60.
  constexpr int key() const { return (octave + 1) * 12 + pc.value(); }
  static constexpr Pitch from_key(int key) {
    int octave = (key >= 0 ? key / 12 : (key - 11) / 12) - 1;
    return {PitchClass(key), octave};
  }

  constexpr auto operator<=>(const Pitch& other) const { return key() <=> other.key(); }
  constexpr bool operator==(const Pitch& other) const { return key() == other.key(); }
};

/// Builds the sounding pitch from a spelled note. B#3 sounds as C4, Cb4 as B3.
constexpr Pitch make_pitch(NoteName name, int written_octave) {
  return Pitch::from_key((written_octave + 1) * 12 + detail::letter_offset(name.letter) + name.accidental);
}

/// Parses "C#4", "Bb2", "E-1".
inline Pitch parse_pitch(std::string_view text) {
  std::size_t split = 1;
  while (split < text.size() && !(text[split] == '-' || (text[split] >= '0' && text[split] <= '9'))) ++split;
  if (split >= text.size()) throw ParseError("pitch '" + std::string(text) + "' has no octave");
  NoteName name = parse_note_name(text.substr(0, split));
  std::string_view digits = text.substr(split);
  int sign = 1;
  if (digits.front() == '-') {
    sign = -1;
    digits.remove_prefix(1);
  }
  if (digits.empty()) throw ParseError("pitch '" + std::string(text) + "' has no octave");
  int octave = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw ParseError("bad octave in pitch '" + std::string(text) + "'");
    octave = octave * 10 + (c - '0');
  }
  return make_pitch(name, sign * octave);
}

inline std::string to_string(Pitch pitch) { return spell(pitch.pc) + std::to_string(pitch.octave); }

/// Name of the interval spanning `diatonic_steps` letter steps and `semitones` half steps.
/// Throws Error for combinations that have no conventional name.
inline std::string interval_name(int diatonic_steps, int semitones) {
  struct Entry {
    int steps;
    int semis;
    const char* name;
  };
  static constexpr Entry kTable[] = {
      {0, 0, "Perfect unison"},     {0, 1, "Augmented unison"},   {1, 0, "Diminished second"},
      {1, 1, "Minor second"},       {1, 2, "Major second"},       {1, 3, "Augmented second"},
      {2, 2, "Diminished third"},   {2, 3, "Minor third"},        {2, 4, "Major third"},
      {2, 5, "Augmented third"},    {3, 4, "Diminished fourth"},  {3, 5, "Perfect fourth"},
      {3, 6, "Augmented fourth"},   {4, 6, "Diminished fifth"},   {4, 7, "Perfect fifth"},
      {4, 8, "Augmented fifth"},    {5, 7, "Diminished sixth"},   {5, 8, "Minor sixth"},
      {5, 9, "Major sixth"},        {5, 10, "Augmented sixth"},   {6, 9, "Diminished seventh"},
      {6, 10, "Minor seventh"},     {6, 11, "Major seventh"},     {6, 12, "Augmented seventh"},
      {7, 11, "Diminished octave"}, {7, 12, "Perfect octave"},
  };
  for (const Entry& e : kTable) {
    if (e.steps == diatonic_steps && e.semis == semitones) return e.name;
  }
  throw Error("no interval named for " + std::to_string(diatonic_steps) + " diatonic steps and " +
              std::to_string(semitones) + " semitones");
}

/// Importance ranking of the twelve semitone intervals (lower rank = more important).
class IntervalOrder {
 public:
  enum class Id { StrictA, TiedB };

  /// 0 > 7 > 5 > 4 > 8 > 3 > 9 > 2 > 10 > 1 > 11 > 6
  static constexpr IntervalOrder strict_a() {
    return IntervalOrder(Id::StrictA, {0, 9, 7, 5, 3, 2, 11, 1, 4, 6, 8, 10});
  }
  /// 0 > 7 = 5 > 4 = 8 > 3 = 9 > 2 = 10 > 1 = 11 > 6
  static constexpr IntervalOrder tied_b() {
    return IntervalOrder(Id::TiedB, {0, 5, 4, 3, 2, 1, 6, 1, 2, 3, 4, 5});
  }

  constexpr int rank(PitchClass semitones) const { return ranks_[static_cast<std::size_t>(semitones.value())]; }
  constexpr Id id() const { return id_; }
  constexpr std::string_view name() const { return id_ == Id::StrictA ? "strict_a" : "tied_b"; }

 private:
  constexpr IntervalOrder(Id id, std::array<int, 12> ranks) : id_(id), ranks_(ranks) {}
  Id id_;
  std::array<int, 12> ranks_;
};

constexpr int interval_rank(PitchClass semitones, const IntervalOrder& order) { return order.rank(semitones); }

}  // namespace chordroot
