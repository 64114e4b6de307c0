#include <gtest/gtest.h>

#include <set>

#include "chordroot/pitch.hpp"

using namespace chordroot;

TEST(PitchClass, ReducesModTwelve) {
  EXPECT_EQ(PitchClass(12).value(), 0);
  EXPECT_EQ(PitchClass(-1).value(), 11);
  EXPECT_EQ(PitchClass(25).value(), 1);
  EXPECT_EQ((PitchClass(10) + 5).value(), 3);
  EXPECT_EQ(PitchClass(2) - PitchClass(10), 4);
}

TEST(NoteNames, TableValues) {
  EXPECT_EQ(pc_of_name({'C', 1}).value(), 1);
  EXPECT_EQ(pc_of_name({'C', 0}).value(), 0);
  EXPECT_EQ(pc_of_name({'B', 1}).value(), 0);
  EXPECT_EQ(pc_of_name({'C', -1}).value(), 11);
  EXPECT_EQ(pc_of_name({'E', 1}).value(), 5);
  EXPECT_EQ(pc_of_name({'F', -1}).value(), 4);
  EXPECT_EQ(pc_of_name({'D', -1}), pc_of_name({'C', 1}));
}

TEST(NoteNames, CanonicalSpelling) {
  EXPECT_EQ(name_of_pc(PitchClass(0)), (NoteName{'C', 0}));
  EXPECT_EQ(name_of_pc(PitchClass(1)), (NoteName{'C', 1}));
  EXPECT_EQ(name_of_pc(PitchClass(10)), (NoteName{'A', 1}));
  EXPECT_EQ(spell(PitchClass(6)), "F#");
  EXPECT_EQ(spell(PitchClassSet{PitchClass(7), PitchClass(0)}), "C G");
}

TEST(NoteNames, RoundTripAllPitchClasses) {
  for (int i = 0; i < 12; ++i) EXPECT_EQ(pc_of_name(name_of_pc(PitchClass(i))).value(), i);
}

TEST(NoteNames, Parse) {
  EXPECT_EQ(parse_note_name("F#"), (NoteName{'F', 1}));
  EXPECT_EQ(parse_note_name("Bb"), (NoteName{'B', -1}));
  EXPECT_EQ(parse_note_name("B♭"), (NoteName{'B', -1}));
  EXPECT_EQ(parse_note_name("C♯"), (NoteName{'C', 1}));
  EXPECT_EQ(parse_note_name("e"), (NoteName{'E', 0}));
  EXPECT_THROW(parse_note_name("F##"), ParseError);
  EXPECT_THROW(parse_note_name("Bbb"), ParseError);
  EXPECT_THROW(parse_note_name("H"), ParseError);
  EXPECT_THROW(parse_note_name(""), ParseError);
  EXPECT_THROW(parse_note_name("C#x"), ParseError);
}

TEST(Pitch, ParseAndKeys) {
  EXPECT_EQ(parse_pitch("C4").key(), 60);
  EXPECT_EQ(parse_pitch("A4").key(), 69);
  EXPECT_EQ(parse_pitch("C#4").key(), 61);
  EXPECT_EQ(parse_pitch("B#3").key(), 60);
  EXPECT_EQ(parse_pitch("Cb4").key(), 59);
  EXPECT_EQ(parse_pitch("Cb4").octave, 3);
  EXPECT_EQ(parse_pitch("C-1").key(), 0);
  EXPECT_EQ(to_string(parse_pitch("Bb2")), "A#2");
  EXPECT_THROW(parse_pitch("C"), ParseError);
  EXPECT_THROW(parse_pitch("C4x"), ParseError);
  for (int k = -12; k < 140; ++k) EXPECT_EQ(Pitch::from_key(k).key(), k);
}

TEST(PitchClassSet, Operations) {
  PitchClassSet c{PitchClass(0), PitchClass(4), PitchClass(7)};
  PitchClassSet cd = c | PitchClassSet{PitchClass(2)};
  EXPECT_EQ(c.size(), 3);
  EXPECT_TRUE(c.is_subset_of(cd));
  EXPECT_FALSE(cd.is_subset_of(c));
  EXPECT_EQ(cd - c, PitchClassSet{PitchClass(2)});
  EXPECT_EQ(c.transposed(2), (PitchClassSet{PitchClass(2), PitchClass(6), PitchClass(9)}));
  std::vector<int> seen;
  for (PitchClass p : cd) seen.push_back(p.value());
  EXPECT_EQ(seen, (std::vector<int>{0, 2, 4, 7}));
}

TEST(Intervals, TableLookups) {
  EXPECT_EQ(interval_name(2, 3), "Minor third");
  EXPECT_EQ(interval_name(0, 0), "Perfect unison");
  EXPECT_EQ(interval_name(6, 9), "Diminished seventh");
  EXPECT_EQ(interval_name(7, 12), "Perfect octave");
  EXPECT_THROW(interval_name(2, 7), Error);
}

TEST(Intervals, TableHasExactlyTwentySixEntries) {
  int named = 0;
  for (int m = 0; m <= 7; ++m) {
    for (int n = 0; n <= 12; ++n) {
      try {
        interval_name(m, n);
        ++named;
      } catch (const Error&) {
      }
    }
  }
  EXPECT_EQ(named, 26);
}

TEST(IntervalOrder, StrictA) {
  auto a = IntervalOrder::strict_a();
  EXPECT_EQ(interval_rank(PitchClass(0), a), 0);
  EXPECT_EQ(interval_rank(PitchClass(6), a), 11);
  const int chain[] = {0, 7, 5, 4, 8, 3, 9, 2, 10, 1, 11, 6};
  for (int i = 0; i < 12; ++i) EXPECT_EQ(a.rank(PitchClass(chain[i])), i);
  std::set<int> ranks;
  for (int i = 0; i < 12; ++i) ranks.insert(a.rank(PitchClass(i)));
  EXPECT_EQ(ranks.size(), 12u);
}

TEST(IntervalOrder, TiedB) {
  auto b = IntervalOrder::tied_b();
  EXPECT_EQ(b.rank(PitchClass(7)), b.rank(PitchClass(5)));
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(b.rank(PitchClass(k)), b.rank(PitchClass(12 - k)));
  for (int k = 1; k < 12; ++k) EXPECT_GT(b.rank(PitchClass(k)), b.rank(PitchClass(0)));
  EXPECT_LT(b.rank(PitchClass(5)), b.rank(PitchClass(4)));
  EXPECT_LT(b.rank(PitchClass(1)), b.rank(PitchClass(6)));
}
