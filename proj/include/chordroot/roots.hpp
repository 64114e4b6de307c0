#pragma once

// Context-free chord root models.
//
//   stacking thirds  longest chain of ascending 3/4-semitone steps through the chord
//   Terhardt         subharmonic coincidence count ("degree") per pitch class
//   Parncutt         weighted subharmonics + bass weight + optional major-key profile
//   Schmid           minimal stacking height with every adjacent gap >= 3 semitones
//
// plus interval-order disambiguation of ambiguous Schmid roots by neighbours.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chordroot/chordify.hpp"
#include "chordroot/error.hpp"
#include "chordroot/pitch.hpp"

namespace chordroot {

enum class Model { StackingThirds, Terhardt, Parncutt, Schmid, SchmidIntervalOrder, Context, ContextAuto };

inline constexpr std::array<Model, 7> kAllModels{Model::StackingThirds, Model::Terhardt,
                                                 Model::Parncutt,       Model::Schmid,
                                                 Model::SchmidIntervalOrder, Model::Context,
                                                 Model::ContextAuto};

constexpr std::string_view model_name(Model m) {
  switch (m) {
    case Model::StackingThirds: return "thirds";
    case Model::Terhardt: return "terhardt";
    case Model::Parncutt: return "parncutt";
    case Model::Schmid: return "schmid";
    case Model::SchmidIntervalOrder: return "schmid-io";
    case Model::Context: return "context";
    case Model::ContextAuto: return "context-auto";
  }
  return "?";
}

inline std::optional<Model> parse_model(std::string_view name) {
  for (Model m : kAllModels)
    if (model_name(m) == name) return m;
  return std::nullopt;
}

/// Outcome of one model on one chord.
///
/// `detail` is indexed by pitch class and means, per model: Schmid, minimal
/// stack height (top) with that pc as root; stacking thirds, chain length;
/// Terhardt, degree; Parncutt, weight. Entries are -1 where not applicable.
struct RootResult {
  PitchClassSet roots;
  Model model = Model::Schmid;
  bool cyclic = false;
  std::array<int, 12> detail{-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1};

  bool unique() const { return roots.size() == 1; }

  /// Smallest detail value over the roots (Schmid: the chord's minimal distance d).
  int distance() const {
    int best = std::numeric_limits<int>::max();
    for (PitchClass r : roots) best = std::min(best, detail[static_cast<std::size_t>(r.value())]);
    return best;
  }
};

/// Pitch classes stacked above an assumed root, lowest first.
struct SchmidStack {
  std::vector<PitchClass> order;
  std::vector<int> heights;  // heights[0] == 0, strictly increasing, adjacent gaps >= 3

  int top() const { return heights.empty() ? 0 : heights.back(); }
};

namespace detail {

inline void require_chord(PitchClassSet pcs) {
  if (pcs.size() < 2) throw Error("a chord needs at least two distinct pitch classes");
}

/// Smallest upward distance >= 3 from `from` to a pitch of class `to`.
constexpr int stack_gap(PitchClass from, PitchClass to) {
  int g = to - from;
  return g < 3 ? g + 12 : g;
}

}  // namespace detail

/// Minimal-height stack of `pcs` over `assumed_root`. Among orderings reaching the
/// same top, the lexicographically smallest height sequence is returned.
///
/// Heights are cumulative per-step gaps, each depending only on the two pitch
/// classes involved, so the minimum is a shortest Hamiltonian path; solved by DP
/// over (placed set, last pc).
inline SchmidStack schmid_stack(PitchClassSet pcs, PitchClass assumed_root) {
  if (!pcs.contains(assumed_root)) throw Error("assumed root is not a pitch class of the chord");
  detail::require_chord(pcs);

  std::vector<PitchClass> others;
  for (PitchClass pc : pcs)
    if (pc != assumed_root) others.push_back(pc);
  const std::size_t m = others.size();
  const std::uint32_t full = (1u << m) - 1;
  auto at = [&](std::size_t pos) { return pos == 0 ? assumed_root : others[pos - 1]; };

  // rest[mask * (m + 1) + pos]: least added height to place all others not in
  // `mask`, standing on element `pos` (0 = root, i + 1 = others[i]).
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  std::vector<int> rest(static_cast<std::size_t>(full + 1) * (m + 1), kInf);
  auto cell = [&](std::uint32_t mask, std::size_t pos) -> int& { return rest[mask * (m + 1) + pos]; };
  for (std::size_t pos = 0; pos <= m; ++pos) cell(full, pos) = 0;
  for (std::uint32_t mask = full; mask-- > 0;) {
    for (std::size_t pos = 0; pos <= m; ++pos) {
      int best = kInf;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (1u << i)) continue;
        best = std::min(best, detail::stack_gap(at(pos), others[i]) + cell(mask | (1u << i), i + 1));
      }
      cell(mask, pos) = best;
    }
  }

  SchmidStack stack{{assumed_root}, {0}};
  std::uint32_t mask = 0;
  std::size_t pos = 0;
  while (mask != full) {
    int target = cell(mask, pos);
    std::size_t pick = m;
    int pick_gap = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) continue;
      int g = detail::stack_gap(at(pos), others[i]);
      if (g + cell(mask | (1u << i), i + 1) == target && g < pick_gap) {
        pick = i;
        pick_gap = g;
      }
    }
    stack.order.push_back(others[pick]);
    stack.heights.push_back(stack.heights.back() + pick_gap);
    mask |= 1u << pick;
    pos = pick + 1;
  }
  return stack;
}

inline RootResult schmid_roots(PitchClassSet pcs) {
  detail::require_chord(pcs);
  RootResult r;
  r.model = Model::Schmid;
  int best = std::numeric_limits<int>::max();
  for (PitchClass pc : pcs) {
    int top = schmid_stack(pcs, pc).top();
    r.detail[static_cast<std::size_t>(pc.value())] = top;
    best = std::min(best, top);
  }
  for (PitchClass pc : pcs)
    if (r.detail[static_cast<std::size_t>(pc.value())] == best) r.roots.insert(pc);
  r.cyclic = r.roots == pcs;
  return r;
}

inline RootResult schmid_roots(const Chord& chord) { return schmid_roots(chord.pcs); }

inline RootResult stacking_thirds_roots(PitchClassSet pcs) {
  detail::require_chord(pcs);
  // Longest simple path along +3/+4 edges; chord sizes are tiny so plain DFS.
  auto longest = [&](auto&& self, PitchClass from, PitchClassSet used) -> int {
    int best = 1;
    for (int step : {3, 4}) {
      PitchClass next = from + step;
      if (pcs.contains(next) && !used.contains(next)) {
        PitchClassSet with = used;
        with.insert(next);
        best = std::max(best, 1 + self(self, next, with));
      }
    }
    return best;
  };

  RootResult r;
  r.model = Model::StackingThirds;
  int best = 0;
  for (PitchClass pc : pcs) {
    int len = longest(longest, pc, PitchClassSet{pc});
    r.detail[static_cast<std::size_t>(pc.value())] = len;
    best = std::max(best, len);
  }
  for (PitchClass pc : pcs)
    if (r.detail[static_cast<std::size_t>(pc.value())] == best) r.roots.insert(pc);
  return r;
}

inline RootResult stacking_thirds_roots(const Chord& chord) { return stacking_thirds_roots(chord.pcs); }

/// Intervals (semitones above the sounding note) of its first ten subharmonics,
/// octaves ignored: unison, fifth below, major third below, major second above,
/// major second below.
inline constexpr std::array<int, 5> kSubharmonicIntervals{0, 5, 8, 2, 10};

inline RootResult terhardt_roots(PitchClassSet pcs) {
  detail::require_chord(pcs);
  RootResult r;
  r.model = Model::Terhardt;
  r.detail.fill(0);
  for (PitchClass p : pcs)
    for (int interval : kSubharmonicIntervals) ++r.detail[static_cast<std::size_t>((p + interval).value())];
  int best = *std::max_element(r.detail.begin(), r.detail.end());
  for (int q = 0; q < 12; ++q)
    if (r.detail[static_cast<std::size_t>(q)] == best) r.roots.insert(PitchClass(q));
  return r;
}

inline RootResult terhardt_roots(const Chord& chord) { return terhardt_roots(chord.pcs); }

struct ParncuttOptions {
  int bass_weight = 20;
  std::optional<PitchClass> major_key;  // tonic; no tonality weighting when empty
  int tolerance = 5;                    // weights closer than this to the maximum tie
};

/// Subharmonic weights by interval above the sounding note.
inline constexpr std::array<int, 12> kParncuttPartialWeights{10, 0, 2, 0, 0, 5, 0, 0, 3, 0, 1, 0};

/// Prevailing-tonality weights for a major key, indexed by interval above the tonic.
inline constexpr std::array<int, 12> kParncuttMajorProfile{33, 0, 10, 1, 17, 15, 2, 24, 1, 11, 0, 5};

inline RootResult parncutt_roots(PitchClassSet pcs, PitchClass bass, const ParncuttOptions& options = {}) {
  detail::require_chord(pcs);
  RootResult r;
  r.model = Model::Parncutt;
  r.detail.fill(0);
  for (int q = 0; q < 12; ++q) {
    PitchClass cand(q);
    int w = 0;
    for (PitchClass p : pcs) w += kParncuttPartialWeights[static_cast<std::size_t>(cand - p)];
    if (cand == bass) w += options.bass_weight;
    if (options.major_key) w += kParncuttMajorProfile[static_cast<std::size_t>(cand - *options.major_key)];
    r.detail[static_cast<std::size_t>(q)] = w;
  }
  int best = *std::max_element(r.detail.begin(), r.detail.end());
  for (int q = 0; q < 12; ++q)
    if (best - r.detail[static_cast<std::size_t>(q)] < options.tolerance) r.roots.insert(PitchClass(q));
  return r;
}

inline RootResult parncutt_roots(const Chord& chord, const ParncuttOptions& options = {}) {
  return parncutt_roots(chord.pcs, chord.bass_pc(), options);
}

/// Narrows ambiguous roots using the neighbouring chords' roots. Each candidate is
/// scored by the sum, over available neighbours, of the best interval rank from
/// any neighbour root up to the candidate; lowest-scoring candidates survive.
/// Unique and cyclic results, and chords without non-cyclic neighbours, pass
/// through. One left-to-right pass over the unmodified input sets.
inline std::vector<PitchClassSet> interval_order_disambiguate(std::span<const RootResult> results,
                                                              const IntervalOrder& order) {
  std::vector<PitchClassSet> out;
  out.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RootResult& cur = results[i];
    if (cur.roots.size() <= 1 || cur.cyclic) {
      out.push_back(cur.roots);
      continue;
    }
    std::vector<const RootResult*> neighbours;
    if (i > 0 && !results[i - 1].cyclic) neighbours.push_back(&results[i - 1]);
    if (i + 1 < results.size() && !results[i + 1].cyclic) neighbours.push_back(&results[i + 1]);
    if (neighbours.empty()) {
      out.push_back(cur.roots);
      continue;
    }

    std::array<int, 12> score{};
    int best = std::numeric_limits<int>::max();
    for (PitchClass cand : cur.roots) {
      int total = 0;
      for (const RootResult* n : neighbours) {
        int nearest = std::numeric_limits<int>::max();
        for (PitchClass other : n->roots) nearest = std::min(nearest, order.rank(PitchClass(cand - other)));
        total += nearest;
      }
      score[static_cast<std::size_t>(cand.value())] = total;
      best = std::min(best, total);
    }
    PitchClassSet kept;
    for (PitchClass cand : cur.roots)
      if (score[static_cast<std::size_t>(cand.value())] == best) kept.insert(cand);
    out.push_back(kept);
  }
  return out;
}

}  // namespace chordroot
