// Roots of a short cadence under every model, from an inline event list.

#include <iostream>

#include "chordroot/chordroot.hpp"

using namespace chordroot;

int main() {
  Score score = parse_eventlist(R"(
# part onset duration pitch
S 0 1 E5
S 1 1 F5
S 2 1 D5
S 3 1 E5
A 0 1 C5
A 1 1 C5
A 2 1 B4
A 3 1 C5
T 0 1 G4
T 1 1 A4
T 2 1 G4
T 3 1 G4
B 0 1 C3
B 1 1 F3
B 2 1 G3
B 3 1 C3
)");

  AnalysisOptions options;
  options.major_key = PitchClass(0);
  AnalysisReport report = analyze_piece("cadence", score, options);

  for (const ChordRecord& c : report.chords) {
    std::cout << c.index << "  " << spell(c.pcs) << " (bass " << to_string(c.bass) << ")\n";
    for (Model m : report.models) std::cout << "    " << model_name(m) << ": " << spell(c.results.at(m).roots) << '\n';
  }

  RootResult g7 = schmid_roots(PitchClassSet{PitchClass(7), PitchClass(11), PitchClass(2), PitchClass(5)});
  std::cout << "G7 root " << spell(g7.roots) << " at distance " << g7.distance() << '\n';
}
