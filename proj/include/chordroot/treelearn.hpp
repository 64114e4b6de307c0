#pragma once

// CART-style decision tree over the eight boolean pair features with
// Gini impurity, a minimum leaf size, and a plain-text tree format.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chordroot/context.hpp"
#include "chordroot/error.hpp"

namespace chordroot {

struct Sample {
  PairFeatures features;
  PairOutcome label = PairOutcome::Ignore;

  bool operator==(const Sample&) const = default;
};

using ClassCounts = std::array<std::int64_t, kOutcomeCount>;

/// Exact non-negative rational, kept reduced.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t n, std::int64_t d) {
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
};

/// 1 - Σ (count_k / total)².
inline Fraction gini(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  std::int64_t squares = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw Error("class counts must be non-negative");
    total += c;
    squares += c * c;
  }
  if (total == 0) throw Error("gini impurity of an empty node is undefined");
  return Fraction::make(total * total - squares, total * total);
}

class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // index into PairFeatures; -1 for a leaf
    int if_true = -1;
    int if_false = -1;
    PairOutcome label = PairOutcome::Ignore;
    ClassCounts counts{};

    bool is_leaf() const { return feature < 0; }
    std::int64_t samples() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;  // nodes[0] is the root

  PairOutcome classify(const PairFeatures& f) const {
    if (nodes.empty()) throw Error("empty decision tree");
    const Node* n = &nodes[0];
    while (!n->is_leaf()) n = &nodes[static_cast<std::size_t>(f[static_cast<std::size_t>(n->feature)] ? n->if_true : n->if_false)];
    return n->label;
  }

  PairOutcome operator()(const PairFeatures& f) const { return classify(f); }

  std::size_t depth() const { return nodes.empty() ? 0 : depth_of(0); }

  bool operator==(const DecisionTree&) const = default;

 private:
  std::size_t depth_of(int i) const {
    const Node& n = nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_of(n.if_true), depth_of(n.if_false));
  }
};

inline PairOutcome classify(const DecisionTree& tree, const PairFeatures& f) { return tree.classify(f); }

namespace detail {

inline ClassCounts count_classes(std::span<const Sample> samples, std::span<const std::size_t> idx) {
  ClassCounts c{};
  for (std::size_t i : idx) ++c[static_cast<std::size_t>(samples[i].label)];
  return c;
}

// Σ c² / n as an exact fraction (numerator, denominator).
__extension__ using i128 = __int128;

inline std::pair<i128, i128> purity(const ClassCounts& c) {
  i128 n = 0;
  i128 sq = 0;
  for (std::int64_t v : c) {
    n += v;
    sq += static_cast<i128>(v) * v;
  }
  return {sq, n};
}

inline PairOutcome majority(const ClassCounts& c) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (c[k] > c[best]) best = k;
  return kAllOutcomes[best];
}

inline int grow(DecisionTree& tree, std::span<const Sample> samples, std::vector<std::size_t> idx,
                std::array<bool, PairFeatures::kCount> used, std::size_t min_leaf) {
  DecisionTree::Node node;
  node.counts = count_classes(samples, idx);
  node.label = majority(node.counts);
  int self = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(node);

  auto nonzero = std::count_if(node.counts.begin(), node.counts.end(), [](std::int64_t v) { return v > 0; });
  if (nonzero <= 1) return self;

  // Weighted Gini decrease is maximal where Σ_child Σ_k c² / n_child is maximal.
  auto [parent_num, parent_den] = purity(node.counts);
  int best_feature = -1;
  i128 best_num = parent_num;
  i128 best_den = parent_den;
  for (std::size_t f = 0; f < PairFeatures::kCount; ++f) {
    if (used[f]) continue;
    std::vector<std::size_t> t;
    std::vector<std::size_t> e;
    for (std::size_t i : idx) (samples[i].features[f] ? t : e).push_back(i);
    if (t.size() < min_leaf || e.size() < min_leaf) continue;
    auto [tn, td] = purity(count_classes(samples, t));
    auto [en, ed] = purity(count_classes(samples, e));
    i128 num = tn * ed + en * td;
    i128 den = td * ed;
    if (num * best_den > best_num * den) {
      best_feature = static_cast<int>(f);
      best_num = num;
      best_den = den;
    }
  }
  if (best_feature < 0) return self;

  std::vector<std::size_t> t;
  std::vector<std::size_t> e;
  for (std::size_t i : idx) (samples[i].features[static_cast<std::size_t>(best_feature)] ? t : e).push_back(i);
  used[static_cast<std::size_t>(best_feature)] = true;
  int if_true = grow(tree, samples, std::move(t), used, min_leaf);
  int if_false = grow(tree, samples, std::move(e), used, min_leaf);
  DecisionTree::Node& n = tree.nodes[static_cast<std::size_t>(self)];
  n.feature = best_feature;
  n.if_true = if_true;
  n.if_false = if_false;
  return self;
}

}  // namespace detail

/// Greedy top-down induction. A split is admissible only when both children keep
/// at least `min_samples_leaf` samples; the admissible split with the largest
/// Gini decrease (lowest feature index on ties) is taken while the decrease is
/// positive. Leaf label is the majority class, ties to the earlier outcome.
inline DecisionTree induce(std::span<const Sample> samples, std::size_t min_samples_leaf = 10) {
  if (samples.empty()) throw Error("cannot induce a tree from an empty dataset");
  if (min_samples_leaf == 0) throw Error("min_samples_leaf must be positive");
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  DecisionTree tree;
  detail::grow(tree, samples, std::move(idx), {}, min_samples_leaf);
  return tree;
}

inline double accuracy(const DecisionTree& tree, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  auto hits = std::count_if(samples.begin(), samples.end(),
                            [&](const Sample& s) { return tree.classify(s.features) == s.label; });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

struct HoldoutSplit {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Test set = every 10th sample, then every 22nd of what remains.
inline HoldoutSplit holdout_split(std::span<const Sample> samples) {
  HoldoutSplit out;
  std::vector<Sample> rest;
  for (std::size_t i = 0; i < samples.size(); ++i) (i % 10 == 0 ? out.test : rest).push_back(samples[i]);
  for (std::size_t i = 0; i < rest.size(); ++i) (i % 22 == 0 ? out.test : out.train).push_back(rest[i]);
  return out;
}

// Tree text format, two spaces of indent per level:
//
//   split same_unique_root
//     true: leaf Ignore 120 3 0 1 0
//     false: split x_sub_y
//       ...
//
// Leaf counts follow the outcome order Ignore RootXFromY RootYFromX RootXFromSubX RootYFromSubY.

namespace detail {

inline void write_node(std::ostringstream& out, const DecisionTree& tree, int i, int depth, std::string_view tag) {
  const DecisionTree::Node& n = tree.nodes[static_cast<std::size_t>(i)];
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << tag;
  if (n.is_leaf()) {
    out << "leaf " << outcome_name(n.label);
    for (std::int64_t c : n.counts) out << ' ' << c;
    out << '\n';
    return;
  }
  out << "split " << kFeatureNames[static_cast<std::size_t>(n.feature)] << '\n';
  write_node(out, tree, n.if_true, depth + 1, "true: ");
  write_node(out, tree, n.if_false, depth + 1, "false: ");
}

struct TreeLine {
  int number;
  int indent;
  std::string_view tag;  // "", "true", "false"
  std::vector<std::string_view> words;
};

inline int read_node(DecisionTree& tree, const std::vector<TreeLine>& lines, std::size_t& at, int indent,
                     std::string_view tag, int parent_line) {
  if (at >= lines.size())
    throw ParseError("truncated tree: missing " + std::string(tag) + " branch", parent_line);
  const TreeLine& line = lines[at];
  if (line.indent != indent || line.tag != tag)
    throw ParseError("expected " + (tag.empty() ? std::string("root node") : std::string(tag) + " branch") +
                         " at indent " + std::to_string(indent),
                     line.number);
  ++at;
  int self = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (line.words.size() == 2 && line.words[0] == "split") {
    auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), line.words[1]);
    if (it == kFeatureNames.end()) throw ParseError("unknown feature '" + std::string(line.words[1]) + "'", line.number);
    int if_true = read_node(tree, lines, at, indent + 2, "true", line.number);
    int if_false = read_node(tree, lines, at, indent + 2, "false", line.number);
    DecisionTree::Node& n = tree.nodes[static_cast<std::size_t>(self)];
    n.feature = static_cast<int>(it - kFeatureNames.begin());
    n.if_true = if_true;
    n.if_false = if_false;
    // Internal counts are not stored; they are the sum of the children.
    for (std::size_t k = 0; k < kOutcomeCount; ++k)
      n.counts[k] = tree.nodes[static_cast<std::size_t>(if_true)].counts[k] +
                    tree.nodes[static_cast<std::size_t>(if_false)].counts[k];
    n.label = majority(n.counts);
    return self;
  }
  if (line.words.size() == 2 + kOutcomeCount && line.words[0] == "leaf") {
    auto label = parse_outcome(line.words[1]);
    if (!label) throw ParseError("unknown outcome '" + std::string(line.words[1]) + "'", line.number);
    DecisionTree::Node& n = tree.nodes[static_cast<std::size_t>(self)];
    n.label = *label;
    for (std::size_t k = 0; k < kOutcomeCount; ++k) {
      std::string_view w = line.words[2 + k];
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
      if (ec != std::errc() || ptr != w.data() + w.size() || v < 0)
        throw ParseError("bad class count '" + std::string(w) + "'", line.number);
      n.counts[k] = v;
    }
    return self;
  }
  throw ParseError("expected 'split <feature>' or 'leaf <outcome> <5 counts>'", line.number);
}

}  // namespace detail

inline std::string save_tree(const DecisionTree& tree) {
  if (tree.nodes.empty()) throw Error("cannot save an empty tree");
  std::ostringstream out;
  out << "# chordroot decision tree\n";
  detail::write_node(out, tree, 0, 0, "");
  return out.str();
}

inline DecisionTree load_tree(std::string_view text) {
  std::vector<detail::TreeLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t indent = raw.find_first_not_of(' ');
    if (indent == std::string_view::npos || raw[indent] == '#') continue;
    std::string_view body = raw.substr(indent);
    std::string_view tag;
    for (std::string_view t : {std::string_view("true:"), std::string_view("false:")}) {
      if (body.starts_with(t)) {
        tag = t.substr(0, t.size() - 1);
        body.remove_prefix(t.size());
      }
    }
    lines.push_back({number, static_cast<int>(indent), tag, detail::split_ws(body)});
  }
  if (lines.empty()) throw ParseError("empty tree file");
  DecisionTree tree;
  std::size_t at = 0;
  detail::read_node(tree, lines, at, 0, "", 0);
  if (at != lines.size()) throw ParseError("unexpected trailing node", lines[at].number);
  return tree;
}

inline constexpr std::string_view kSampleCsvHeader =
    "nx,ny,x_sub_y,y_sub_x,same_unique_root,hy,ux_rx_in_y,uy_ry_in_x,label";

inline std::string write_samples_csv(std::span<const Sample> samples) {
  std::ostringstream out;
  out << kSampleCsvHeader << '\n';
  for (const Sample& s : samples) {
    for (bool v : s.features.values()) out << (v ? '1' : '0') << ',';
    out << outcome_name(s.label) << '\n';
  }
  return out.str();
}

inline std::vector<Sample> read_samples_csv(std::string_view text) {
  std::vector<Sample> out;
  int number = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++number;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kSampleCsvHeader) throw ParseError("expected header '" + std::string(kSampleCsvHeader) + "'", number);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != PairFeatures::kCount + 1)
      throw ParseError("expected " + std::to_string(PairFeatures::kCount + 1) + " columns", number);
    std::array<bool, PairFeatures::kCount> v{};
    for (std::size_t i = 0; i < PairFeatures::kCount; ++i) {
      if (cells[i] != "0" && cells[i] != "1") throw ParseError("feature values must be 0 or 1", number);
      v[i] = cells[i] == "1";
    }
    auto label = parse_outcome(cells.back());
    if (!label) throw ParseError("unknown label '" + std::string(cells.back()) + "'", number);
    out.push_back({PairFeatures::from_values(v), *label});
  }
  if (!header_seen) throw ParseError("missing CSV header");
  return out;
}

}  // namespace chordroot
