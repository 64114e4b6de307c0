// treetrain SAMPLES.csv [-o TREE] [--min-samples-leaf N] [--holdout]
//
// Induces a pair-outcome decision tree from a feature CSV (as written by
// `analyse --features`, after relabelling by hand).

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chordroot/chordroot.hpp"

using namespace chordroot;

int main(int argc, char** argv) {
  std::string csv;
  std::string out;
  std::size_t min_leaf = 10;
  bool holdout = false;

  CLI::App app{"Train a chord-pair decision tree", "treetrain"};
  app.add_option("SAMPLES", csv, "Training CSV")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--output", out, "Write the tree here (default: stdout)");
  app.add_option("--min-samples-leaf", min_leaf, "Smallest leaf size")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--holdout", holdout, "Train on the split's training part and report test accuracy");
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<Sample> samples = read_samples_csv(read_file(csv));
    std::vector<Sample> train = samples;
    HoldoutSplit split;
    if (holdout) {
      split = holdout_split(samples);
      train = split.train;
    }
    DecisionTree tree = induce(train, min_leaf);
    std::string text = save_tree(tree);
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f || !(f << text)) throw Error("cannot write " + out);
    }
    std::cerr << samples.size() << " samples, " << tree.nodes.size() << " nodes, depth " << tree.depth() << '\n';
    std::cerr << "training accuracy " << accuracy(tree, train) * 100 << "%\n";
    if (holdout)
      std::cerr << "holdout: " << split.train.size() << " train / " << split.test.size() << " test, accuracy "
                << accuracy(tree, split.test) * 100 << "%\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
