#pragma once

// Context model: chord pairs inside a chord group are classified by a decision
// tree over eight boolean features, and the outcome adjusts the pair's Schmid
// roots (copy one chord's root to the other, or re-derive a root after removing
// the notes held over between them). Larger groups are reduced to overlapping pairs.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "chordroot/chordify.hpp"
#include "chordroot/roots.hpp"

namespace chordroot {

/// The eight pair features, declared in tree-feature index order.
struct PairFeatures {
  bool nx = false;                // X fits a stack of thirds
  bool ny = false;                // Y fits a stack of thirds
  bool x_sub_y = false;           // X is a partial sub-chord of Y
  bool y_sub_x = false;           // Y is a partial sub-chord of X
  bool same_unique_root = false;  // R(X) = R(Y) and R(X) unique
  bool hy = false;                // more than half of Y's notes are new
  bool ux_rx_in_y = false;        // R(X) unique and contained in Y
  bool uy_ry_in_x = false;        // R(Y) unique and contained in X

  static constexpr std::size_t kCount = 8;

  std::array<bool, kCount> values() const {
    return {nx, ny, x_sub_y, y_sub_x, same_unique_root, hy, ux_rx_in_y, uy_ry_in_x};
  }
  bool operator[](std::size_t i) const { return values()[i]; }

  static PairFeatures from_values(const std::array<bool, kCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  }
  /// Bit i of `bits` is feature i; enumerates all 256 vectors for bits in 0..255.
  static PairFeatures from_bits(unsigned bits) {
    std::array<bool, kCount> v{};
    for (std::size_t i = 0; i < kCount; ++i) v[i] = (bits >> i) & 1u;
    return from_values(v);
  }

  bool operator==(const PairFeatures&) const = default;
};

inline constexpr std::array<std::string_view, PairFeatures::kCount> kFeatureNames{
    "nx", "ny", "x_sub_y", "y_sub_x", "same_unique_root", "hy", "ux_rx_in_y", "uy_ry_in_x"};

enum class PairOutcome { Ignore, RootXFromY, RootYFromX, RootXFromSubX, RootYFromSubY };

inline constexpr std::size_t kOutcomeCount = 5;
inline constexpr std::array<PairOutcome, kOutcomeCount> kAllOutcomes{
    PairOutcome::Ignore, PairOutcome::RootXFromY, PairOutcome::RootYFromX, PairOutcome::RootXFromSubX,
    PairOutcome::RootYFromSubY};

constexpr std::string_view outcome_name(PairOutcome o) {
  switch (o) {
    case PairOutcome::Ignore: return "Ignore";
    case PairOutcome::RootXFromY: return "RootXFromY";
    case PairOutcome::RootYFromX: return "RootYFromX";
    case PairOutcome::RootXFromSubX: return "RootXFromSubX";
    case PairOutcome::RootYFromSubY: return "RootYFromSubY";
  }
  return "?";
}

inline std::optional<PairOutcome> parse_outcome(std::string_view name) {
  for (PairOutcome o : kAllOutcomes)
    if (outcome_name(o) == name) return o;
  return std::nullopt;
}

using PairClassifier = std::function<PairOutcome(const PairFeatures&)>;

/// N(c): the chord's minimal Schmid distance stays within major-third steps.
inline bool feature_n(PitchClassSet pcs, const RootResult& schmid) {
  return schmid.distance() <= 4 * (pcs.size() - 1);
}
inline bool feature_n(const Chord& chord) { return feature_n(chord.pcs, schmid_roots(chord)); }

inline bool contained(PitchClassSet a, PitchClassSet b) { return a.is_subset_of(b); }
inline bool contained(const Chord& a, const Chord& b) { return contained(a.pcs, b.pcs); }
inline PitchClassSet difference(PitchClassSet a, PitchClassSet b) { return a - b; }
inline PitchClassSet difference(const Chord& a, const Chord& b) { return a.pcs - b.pcs; }

/// a ⊴ b: a is contained in b, or none of b's roots occur in a while a's unique root occurs in b.
inline bool partial_sub(PitchClassSet a, PitchClassSet b, const RootResult& ra, const RootResult& rb) {
  if (contained(a, b)) return true;
  return !rb.roots.intersects(a) && ra.unique() && ra.roots.is_subset_of(b);
}
inline bool partial_sub(const Chord& a, const Chord& b, const RootResult& ra, const RootResult& rb) {
  return partial_sub(a.pcs, b.pcs, ra, rb);
}

/// H(Y): Y has more newly started notes than notes held over from X.
inline bool feature_h(const Chord& x, const Chord& y) {
  int fresh = 0;
  int held = 0;
  for (const Member& m : y.members) {
    if (x.has_member(m.id))
      ++held;
    else if (m.onset == y.onset)
      ++fresh;
  }
  return fresh > held;
}

inline PairFeatures features_of_pair(const Chord& x, const Chord& y, const RootResult& rx, const RootResult& ry) {
  PairFeatures f;
  f.nx = feature_n(x.pcs, rx);
  f.ny = feature_n(y.pcs, ry);
  f.x_sub_y = partial_sub(x, y, rx, ry);
  f.y_sub_x = partial_sub(y, x, ry, rx);
  f.same_unique_root = rx.unique() && rx.roots == ry.roots;
  f.hy = feature_h(x, y);
  f.ux_rx_in_y = rx.unique() && rx.roots.is_subset_of(y.pcs);
  f.uy_ry_in_x = ry.unique() && ry.roots.is_subset_of(x.pcs);
  return f;
}

inline PairFeatures features_of_pair(const Chord& x, const Chord& y) {
  return features_of_pair(x, y, schmid_roots(x), schmid_roots(y));
}

/// The hand-built tree. "No more features" and "insufficient training data"
/// leaves are Ignore.
inline PairOutcome manual_tree(const PairFeatures& f) {
  using enum PairOutcome;
  if (f.same_unique_root) return Ignore;
  if (f.nx) {
    if (f.hy) return f.ny ? Ignore : RootYFromSubY;
    if (f.x_sub_y) return RootYFromX;
    if (f.y_sub_x) return RootXFromY;
    if (f.ux_rx_in_y) return RootYFromX;
    return Ignore;
  }
  if (!f.ny) return Ignore;
  if (f.hy) return RootXFromSubX;
  if (f.y_sub_x) return RootXFromY;
  if (f.x_sub_y) return RootYFromX;
  if (f.uy_ry_in_x) return RootXFromY;
  return Ignore;
}

/// The tree induced from annotated pairs (uses four of the eight features).
inline PairOutcome generated_tree(const PairFeatures& f) {
  using enum PairOutcome;
  if (f.same_unique_root) return Ignore;
  if (f.x_sub_y) {
    if (f.hy) return f.ny ? Ignore : RootYFromSubY;
    return RootYFromX;
  }
  if (f.ny) return f.hy ? RootXFromSubX : RootXFromY;
  return f.hy ? RootYFromSubY : RootYFromX;
}

/// Pitch classes of `chord` after dropping the note instances that also sound in
/// `other`. Empty when fewer than two pitch classes would remain.
inline std::optional<PitchClassSet> without_held(const Chord& chord, const Chord& other) {
  PitchClassSet pcs;
  for (const Member& m : chord.members)
    if (!other.has_member(m.id)) pcs.insert(m.pc());
  if (pcs.size() < 2) return std::nullopt;
  return pcs;
}

inline std::pair<RootResult, RootResult> apply_outcome(const Chord& x, const Chord& y, const RootResult& rx,
                                                       const RootResult& ry, PairOutcome o) {
  RootResult nx = rx;
  RootResult ny = ry;
  auto adopt = [](RootResult& target, const RootResult& source) {
    target.roots = source.roots;
    target.cyclic = source.cyclic;
  };
  switch (o) {
    case PairOutcome::Ignore: break;
    case PairOutcome::RootYFromX: adopt(ny, rx); break;
    case PairOutcome::RootXFromY: adopt(nx, ry); break;
    case PairOutcome::RootYFromSubY:
      if (auto sub = without_held(y, x)) ny = schmid_roots(*sub);
      break;
    case PairOutcome::RootXFromSubX:
      if (auto sub = without_held(x, y)) nx = schmid_roots(*sub);
      break;
  }
  return {nx, ny};
}

/// Context roots for one group. `schmid` holds the group's context-free results.
/// Interior chords take the pair proposals only when both agree.
inline std::vector<RootResult> analyze_group(std::span<const Chord> group, std::span<const RootResult> schmid,
                                             const PairClassifier& classify) {
  std::vector<RootResult> out(schmid.begin(), schmid.end());
  const std::size_t n = group.size();
  if (n < 2) return out;

  std::vector<RootResult> as_x(n - 1);
  std::vector<RootResult> as_y(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    PairFeatures f = features_of_pair(group[k], group[k + 1], schmid[k], schmid[k + 1]);
    std::tie(as_x[k], as_y[k]) = apply_outcome(group[k], group[k + 1], schmid[k], schmid[k + 1], classify(f));
  }
  out.front() = as_x.front();
  out.back() = as_y.back();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const RootResult& from_left = as_y[j - 1];
    const RootResult& from_right = as_x[j];
    if (from_left.roots == from_right.roots) out[j] = from_left;
  }
  return out;
}

/// Context roots for a whole piece, in chord order. `schmid` is aligned with `chords`.
inline std::vector<RootResult> context_roots(std::span<const Chord> chords, std::span<const ChordGroup> groups,
                                             std::span<const RootResult> schmid, const PairClassifier& classify,
                                             Model label = Model::Context) {
  std::vector<RootResult> out;
  out.reserve(chords.size());
  for (const ChordGroup& g : groups) {
    auto part = analyze_group(g.of(chords), schmid.subspan(g.begin, g.size()), classify);
    out.insert(out.end(), part.begin(), part.end());
  }
  for (RootResult& r : out) r.model = label;
  return out;
}

enum class TreeKind { Manual, Generated };

inline std::vector<RootResult> context_roots(std::span<const Chord> chords, std::span<const ChordGroup> groups,
                                             TreeKind tree = TreeKind::Manual) {
  std::vector<RootResult> schmid;
  schmid.reserve(chords.size());
  for (const Chord& c : chords) schmid.push_back(schmid_roots(c));
  if (tree == TreeKind::Manual) return context_roots(chords, groups, schmid, manual_tree, Model::Context);
  return context_roots(chords, groups, schmid, generated_tree, Model::ContextAuto);
}

/// One adjacent chord pair inside a group, with its features and tree outcome.
struct PairRecord {
  int x_index = 0;  // chord number of X
  std::size_t group_size = 0;
  PairFeatures features;
  PairOutcome outcome = PairOutcome::Ignore;
};

inline std::vector<PairRecord> pair_records(std::span<const Chord> chords, std::span<const ChordGroup> groups,
                                            std::span<const RootResult> schmid, const PairClassifier& classify) {
  std::vector<PairRecord> out;
  for (const ChordGroup& g : groups) {
    for (std::size_t k = g.begin; k + 1 < g.end; ++k) {
      PairFeatures f = features_of_pair(chords[k], chords[k + 1], schmid[k], schmid[k + 1]);
      out.push_back({chords[k].index, g.size(), f, classify(f)});
    }
  }
  return out;
}

}  // namespace chordroot
