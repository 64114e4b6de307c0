// analyse INPUT [OPTIONS]
//
// Analyses one score, or every score with the chosen extension in a directory,
// and writes HTML / JSON / numbered MusicXML / per-model root files.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "chordroot/chordroot.hpp"

namespace fs = std::filesystem;
using namespace chordroot;

namespace {

struct Options {
  std::string input;
  std::string filetype = ".mxl";
  std::string outdir;
  std::vector<std::string> models;
  bool nohtmls = false;
  bool musicxmls = false;
  bool txts = false;
  bool statistics = false;
  bool strict = false;
  bool json = false;
  bool features = false;
  bool verbose = false;
  bool debug = false;
  bool bridge = false;
  std::string key;
  std::string interval_order = "a";
  std::string tree;
  unsigned jobs = 1;
};

struct PieceResult {
  std::string log;
  std::string errors;
  bool ok = true;
  std::optional<AnalysisReport> report;
  bool annotated = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("error writing " + path.string());
}

PieceResult run_piece(const fs::path& file, const Options& opt, const AnalysisOptions& analysis) {
  PieceResult res;
  std::ostringstream log;
  log << "Analysing: " << file.string() << '\n';
  try {
    Warnings warnings;
    Score score = load_score(file, &warnings);
    if (opt.debug)
      for (const std::string& w : warnings) log << "  warning: " << w << '\n';

    fs::path dir = opt.outdir.empty() ? file.parent_path() : fs::path(opt.outdir);
    std::string stem = file.stem().string();
    Chordification cf = chordify(score, analysis.grouping);
    AnalysisReport report = analyze_chords(stem, cf.chords, cf.groups, analysis);
    if (opt.debug)
      log << "  " << score.notes.size() << " notes, " << cf.chords.size() << " chords, " << cf.groups.size()
          << " groups\n";

    if (opt.statistics) {
      fs::path correct = file.parent_path() / (stem + ".correct.txt");
      if (fs::exists(correct)) {
        score_report(report, parse_annotation(read_file(correct)), opt.strict);
        res.annotated = true;
      } else if (opt.verbose) {
        log << "No annotation file (" << correct.string() << ")\n";
      }
    }

    if (!opt.nohtmls) {
      fs::path out = dir / (stem + ".html");
      write_text(out, write_html(report));
      if (opt.verbose) log << "Wrote HTML file (" << out.string() << ")\n";
    }
    if (opt.json) {
      fs::path out = dir / (stem + ".json");
      write_text(out, write_json(report));
      if (opt.verbose) log << "Wrote JSON file (" << out.string() << ")\n";
    }
    if (opt.musicxmls) {
      fs::path out = dir / (stem + ".numbered.xml");
      write_text(out, write_numbered_musicxml(score, cf.chords));
      if (opt.verbose) log << "Wrote MusicXML file (" << out.string() << ")\n";
    }
    if (opt.txts) {
      for (Model m : analysis.models) {
        fs::path out = dir / (stem + "." + std::string(model_name(m)) + ".txt");
        write_text(out, roots_txt(report, m));
        if (opt.verbose) log << "Wrote text file (" << out.string() << ")\n";
      }
    }
    if (opt.features) {
      std::vector<RootResult> schmid;
      for (const Chord& c : cf.chords) schmid.push_back(schmid_roots(c));
      std::vector<Sample> samples;
      for (const PairRecord& p : pair_records(cf.chords, cf.groups, schmid, manual_tree))
        samples.push_back({p.features, p.outcome});
      fs::path out = dir / (stem + ".pairs.csv");
      write_text(out, write_samples_csv(samples));
      if (opt.verbose) log << "Wrote feature file (" << out.string() << ")\n";
    }
    if (opt.verbose) log << "Done!\n";
    res.report = std::move(report);
  } catch (const std::exception& e) {
    res.ok = false;
    res.annotated = false;
    res.errors = "error: " + file.string() + ": " + e.what() + "\n";
  }
  res.log = log.str();
  return res;
}

std::vector<fs::path> collect_inputs(const Options& opt) {
  fs::path input(opt.input);
  if (fs::is_regular_file(input)) return {input};
  if (!fs::is_directory(input)) throw Error("input not found: " + opt.input);
  std::vector<fs::path> files;
  for (const fs::directory_entry& e : fs::directory_iterator(input)) {
    if (!e.is_regular_file()) continue;
    std::string name = e.path().filename().string();
    if (name.ends_with(opt.filetype) && !name.ends_with(".numbered.xml")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Model> parse_models(const std::vector<std::string>& args) {
  std::vector<Model> out;
  for (const std::string& arg : args) {
    std::istringstream words(arg);
    std::string w;
    while (words >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      auto m = parse_model(w);
      if (!m) throw Error("unknown model '" + w + "'");
      if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
  }
  if (out.empty()) out.assign(kAllModels.begin(), kAllModels.end());
  return out;
}

void print_statistics(std::ostream& out, const std::vector<PieceResult>& results, const std::vector<Model>& models,
                      bool strict) {
  out << "\nStatistics (" << (strict ? "strict" : "membership") << ")\n";
  std::size_t width = 5;
  for (const PieceResult& r : results)
    if (r.annotated) width = std::max(width, r.report->piece.size());
  auto cell = [](const std::string& s) {
    std::string padded = s;
    if (padded.size() < 13) padded.insert(0, 13 - padded.size(), ' ');
    return padded;
  };
  out << std::string(width, ' ');
  for (Model m : models) out << cell(std::string(model_name(m)));
  out << '\n';
  std::map<Model, Accuracy> total;
  for (const PieceResult& r : results) {
    if (!r.annotated) continue;
    out << r.report->piece << std::string(width - r.report->piece.size(), ' ');
    for (Model m : models) {
      const Accuracy& a = r.report->accuracy.at(m);
      total[m] += a;
      out << cell(a.formatted());
    }
    out << '\n';
  }
  out << "total" << std::string(width - 5, ' ');
  for (Model m : models) out << cell(total[m].formatted());
  out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  // "-mx" is a two-letter short option, which CLI11 cannot declare directly.
  std::vector<std::string> args(argv, argv + argc);
  for (std::string& a : args)
    if (a == "-mx") a = "--musicxmls";
  std::reverse(args.begin() + 1, args.end());
  args.erase(args.begin());

  Options opt;
  CLI::App app{"Determine chord roots of MusicXML scores", "analyse"};
  app.add_option("INPUT", opt.input, "Score file or directory of scores")->required();
  app.add_option("-t,--filetype", opt.filetype, "Extension of files read from an input directory")
      ->capture_default_str();
  app.add_option("-o,--outdir", opt.outdir, "Output directory (default: next to each input)");
  app.add_option("-m,--models", opt.models,
                 "Models, whitespace separated: thirds terhardt parncutt schmid schmid-io context context-auto");
  app.add_flag("--nohtmls", opt.nohtmls, "Do not write HTML files");
  app.add_flag("--musicxmls,--musicxml", opt.musicxmls, "Write a numbered MusicXML file per input (-mx)");
  app.add_flag("--txts", opt.txts, "Write one .txt of roots per model and input");
  app.add_flag("-s,--statistics", opt.statistics, "Score models against NAME.correct.txt files");
  app.add_flag("--strict", opt.strict, "Statistics: count a chord only when the prediction is exactly the annotated root");
  app.add_flag("--json", opt.json, "Write a JSON report per input");
  app.add_flag("--features", opt.features, "Write the chord-pair feature CSV per input");
  app.add_option("--key", opt.key, "Major key tonic for the Parncutt model, e.g. C or Bb");
  app.add_option("--interval-order", opt.interval_order, "Interval order for schmid-io: a or b")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  app.add_option("--tree", opt.tree, "Tree file used by context-auto instead of the built-in tree");
  app.add_flag("--bridge", opt.bridge, "Let chord groups span non-chord segments");
  app.add_option("-j,--jobs", opt.jobs, "Files analysed in parallel")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", opt.verbose, "Increase output verbosity");
  app.add_flag("-d,--debug", opt.debug, "Display debug messages");
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (opt.debug) opt.verbose = true;

  AnalysisOptions analysis;
  std::vector<fs::path> files;
  try {
    analysis.models = parse_models(opt.models);
    if (!opt.key.empty()) analysis.major_key = pc_of_name(parse_note_name(opt.key));
    analysis.order = opt.interval_order == "b" ? IntervalOrder::tied_b() : IntervalOrder::strict_a();
    analysis.grouping.bridge_non_chords = opt.bridge;
    if (!opt.tree.empty()) analysis.auto_tree = load_tree(read_file(opt.tree));
    files = collect_inputs(opt);
    if (!opt.outdir.empty()) fs::create_directories(opt.outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<PieceResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) results[i] = run_piece(files[i], opt, analysis);
  };
  std::vector<std::thread> pool;
  unsigned threads = std::min<unsigned>(opt.jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i > 0 && opt.verbose) std::cout << '\n';
    std::cout << results[i].log;
    std::cerr << results[i].errors;
    ok = ok && results[i].ok;
  }
  if (opt.statistics) print_statistics(std::cout, results, analysis.models, opt.strict);
  std::cout.flush();
  return ok ? 0 : 1;
}
